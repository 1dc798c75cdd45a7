import numpy as np
import pytest

from convedit.datagen import generate_all, generate_single_task
from convedit.edits import UseCase
from convedit.errors import ConvEditError
from convedit.evaluation import evaluate, exact_match, latency_bench
from convedit.evaluation.sweep import SweepPoint, write_sweep
from convedit.model import ModelConfig, Rewriter, train
from convedit.model.labels import onehot_output_from_labels, labels_from_program
from convedit.tokens import concat_turns

SMALL = ModelConfig(embed_dim=48, hidden_dim=32, rr_proj_dim=32,
                    max_epochs=50, patience=50, seed=0)


@pytest.fixture(scope="module")
def steering_model():
    examples = generate_single_task(UseCase.STEERING, 600, seed=8)
    tr = [ex for ex in examples if ex.split == "train"]
    va = [ex for ex in examples if ex.split == "valid"]
    model, log = train(tr, va, SMALL)
    return model, log, examples


def test_single_task_training_overfits_steering(steering_model):
    model, log, examples = steering_model
    assert log[-1]["L"] < log[0]["L"]
    best = max(r["valid_exact_match"] for r in log)
    assert best >= 0.9


def test_epoch_log_schema(steering_model):
    _, log, _ = steering_model
    for record in log:
        assert set(record) == {"epoch", "L_RD", "L_RR", "L_Del", "L",
                               "valid_exact_match"}
        assert record["L"] == pytest.approx(
            record["L_RD"] + record["L_RR"] + record["L_Del"])


def test_training_is_seed_deterministic():
    examples = generate_single_task(UseCase.STEERING, 60, seed=8)
    tr = [ex for ex in examples if ex.split == "train"]
    va = [ex for ex in examples if ex.split == "valid"]
    cfg = ModelConfig(embed_dim=16, hidden_dim=8, rr_proj_dim=8,
                      max_epochs=2, patience=2, seed=3)
    m1, log1 = train(tr, va, cfg)
    m2, log2 = train(tr, va, cfg)
    assert log1 == log2
    for name in m1.params:
        assert np.array_equal(m1.params[name], m2.params[name])


def test_empty_training_set_rejected():
    with pytest.raises(ConvEditError):
        train([], [], SMALL)


def test_evaluate_report_partitions_examples(steering_model):
    model, _, examples = steering_model
    test = [ex for ex in examples if ex.split == "test"]
    report = evaluate(model, test)
    result = report.per_task["steering"]
    assert result.size == len(test)
    assert result.exact + sum(result.failures.values()) == result.size
    assert 0.0 <= report.macro_exact_match <= 1.0


def test_exact_match_is_case_sensitive():
    assert exact_match(["Play", "Jazz"], ["Play", "Jazz"])
    assert not exact_match(["play", "Jazz"], ["Play", "Jazz"])
    assert not exact_match(["Play"], ["Play", "Jazz"])


def test_latency_bench_requires_enough_examples(steering_model):
    model, _, examples = steering_model
    with pytest.raises(ConvEditError):
        latency_bench(model, examples[:10])


def test_latency_bench_report(steering_model):
    model, _, examples = steering_model
    report = latency_bench(model, examples[:120], warmup=3)
    assert report.reps == 120
    assert report.p95_us >= report.p50_us > 0
    assert report.hardware


def test_write_sweep_format(tmp_path):
    points = [SweepPoint(0, 0.1, 0.9), SweepPoint(100, 0.5, 0.91)]
    path = tmp_path / "sweep.tsv"
    write_sweep(points, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0].startswith("#")
    assert lines[1].split("\t") == ["0", "0.1000", "0.9000"]


def test_single_encoder_call_per_query(steering_model):
    model, _, examples = steering_model
    fresh = Rewriter(model.params, model.config, model.vocab)
    for ex in examples[:5]:
        fresh.predict_program(concat_turns(ex.context, ex.followup))
    assert fresh.encode_calls == 5
