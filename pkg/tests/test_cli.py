import json

import pytest

from convedit.cli import main
from convedit.datagen import generate_single_task
from convedit.datagen.dataset import read_dataset, write_dataset
from convedit.edits import UseCase


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_datagen_writes_all_datasets(tmp_path, capsys):
    out = tmp_path / "data"
    code, stdout, _ = run(capsys, "datagen", "--out", str(out), "--seed", "0",
                          "--n-per-use-case", "30", "--n-compositional", "20", "--json")
    assert code == 0
    names = {p.name for p in out.glob("*.jsonl")}
    assert names == {"intent.jsonl", "entity.jsonl", "repair.jsonl",
                     "disfluency.jsonl", "steering.jsonl", "compositional.jsonl"}
    assert (out / "stats.json").exists()
    payload = json.loads(stdout)
    assert payload["stats"]["steering"]["count"] == 30


def test_refuses_to_overwrite_without_force(tmp_path, capsys):
    out = tmp_path / "data"
    args = ("datagen", "--out", str(out), "--seed", "0",
            "--n-per-use-case", "10", "--n-compositional", "10")
    assert run(capsys, *args)[0] == 0
    code, _, err = run(capsys, *args)
    assert code == 2
    assert "--force" in err
    assert run(capsys, *args, "--force")[0] == 0


def test_rewrite_with_gold_program(tmp_path, capsys):
    program = {
        "entity": {"substitution": {"replacement": [2, 4], "replaced": [9, 10]},
                   "deletions": []},
        "repair": {"substitution": {"replacement": [9, 12], "replaced": [2, 6]},
                   "deletions": [6, 7, 8]},
    }
    path = tmp_path / "program.json"
    path.write_text(json.dumps(program), encoding="utf-8")
    code, stdout, _ = run(
        capsys, "rewrite",
        "--context", "Who is Homer Simpson's eldest doctor",
        "--followup", "I said his eldest daughter",
        "--gold-program", str(path), "--trace", "--json")
    assert code == 0
    payload = json.loads(stdout)
    assert payload["rewrite"] == "Who is Homer Simpson's eldest daughter"
    assert payload["trace"] == [
        "Who is eldest doctor [SEP] I said Homer Simpson's eldest daughter",
        "Who is Homer Simpson's eldest daughter [SEP] I said",
    ]


def test_rewrite_without_model_or_program_errors(capsys):
    code, _, err = run(capsys, "rewrite", "--followup", "hello there")
    assert code == 2
    assert "gold-program" in err


def test_oracle_verify_reachable_and_not(capsys):
    code, stdout, _ = run(
        capsys, "oracle-verify", "--context", "Play some jazz",
        "--followup", "in my living room",
        "--rewrite", "Play some jazz in my living room", "--json")
    assert code == 0
    assert json.loads(stdout)["reachable"] is True

    code, stdout, _ = run(
        capsys, "oracle-verify", "--context", "When does Rocket Sushi close",
        "--followup", "How long does it take to drive there",
        "--rewrite", "How long does it take to drive to Rocket Sushi", "--json")
    assert code == 1
    assert json.loads(stdout)["reachable"] is False


def test_train_and_eval_round_trip(tmp_path, capsys):
    data_path = tmp_path / "steering.jsonl"
    write_dataset(generate_single_task(UseCase.STEERING, 80, seed=8), data_path)
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps({
        "embed_dim": 16, "hidden_dim": 8, "rr_proj_dim": 8,
        "max_epochs": 2, "patience": 2,
    }), encoding="utf-8")
    model_dir = tmp_path / "model"
    code, stdout, _ = run(capsys, "train", "--data", str(data_path),
                          "--config", str(config_path), "--seed", "1",
                          "--out", str(model_dir), "--json")
    assert code == 0
    assert (model_dir / "model.ckpt").exists()
    assert (model_dir / "config.json").exists()
    assert json.loads((model_dir / "config.json").read_text())["seed"] == 1
    log = [json.loads(l) for l in (model_dir / "train_log.jsonl").read_text().splitlines()]
    assert len(log) == 2

    code, stdout, _ = run(capsys, "eval", "--model", str(model_dir / "model.ckpt"),
                          "--data", str(data_path), "--split", "test", "--json")
    assert code == 0
    payload = json.loads(stdout)
    assert "macro_exact_match" in payload and "steering" in payload["per_task"]


def test_config_with_unknown_key_errors(tmp_path, capsys):
    data_path = tmp_path / "d.jsonl"
    write_dataset(generate_single_task(UseCase.STEERING, 10, seed=0), data_path)
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps({"not_a_setting": 3}), encoding="utf-8")
    code, _, err = run(capsys, "train", "--data", str(data_path),
                       "--config", str(config_path), "--out", str(tmp_path / "m"))
    assert code == 2
    assert "not_a_setting" in err
