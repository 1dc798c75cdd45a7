"""Command line entry points: datagen, train, eval, sweep, bench, rewrite, oracle-verify."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .bruteforce import derive_program_bruteforce
from .datagen import generate_all
from .datagen.dataset import read_dataset, stats_report, write_dataset
from .edits import CANONICAL_ORDER, EditProgram, UseCase
from .engine import apply_program
from .errors import ConvEditError
from .evaluation import composition_sweep, evaluate, latency_bench, write_sweep
from .model import ModelConfig, Rewriter, train
from .tokens import concat_turns


def _load_config(path: str | None, seed: int | None) -> ModelConfig:
    overrides = {}
    if path is not None:
        with open(path, encoding="utf-8") as f:
            overrides = json.load(f)
        if not isinstance(overrides, dict):
            raise ConvEditError("config file must hold a JSON object")
    cfg = ModelConfig.from_dict(overrides)
    if seed is not None:
        cfg.seed = seed
    return cfg


def _out_dir(args) -> Path:
    out = Path(args.out)
    if out.exists() and any(out.iterdir()) and not args.force:
        raise ConvEditError(
            f"output directory {out} is not empty; pass --force to overwrite")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _echo_config(cfg: ModelConfig, out: Path) -> None:
    (out / "config.json").write_text(
        json.dumps(dataclasses.asdict(cfg), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")


def _emit(payload: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")


def cmd_datagen(args) -> int:
    out = _out_dir(args)
    datasets = generate_all(args.n_per_use_case, args.n_compositional, args.seed or 0)
    summary = {}
    for name, examples in datasets.items():
        write_dataset(examples, out / f"{name}.jsonl")
        summary[name] = stats_report(examples)
    (out / "stats.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _emit({"out": str(out), "datasets": sorted(datasets),
           "stats": summary} if args.json else
          {"out": str(out), "datasets": ", ".join(sorted(datasets))}, args.json)
    return 0


def _read_splits(paths: list[str]):
    examples = []
    for p in paths:
        examples.extend(read_dataset(p))
    return examples


def cmd_train(args) -> int:
    cfg = _load_config(args.config, args.seed)
    out = _out_dir(args)
    _echo_config(cfg, out)
    examples = _read_splits(args.data)
    tr = [ex for ex in examples if ex.split == "train"]
    va = [ex for ex in examples if ex.split == "valid"]
    rewriter, log = train(tr, va, cfg, log_path=out / "train_log.jsonl")
    rewriter.save(out / "model.ckpt")
    best = max((r["valid_exact_match"] for r in log), default=0.0)
    _emit({"checkpoint": str(out / "model.ckpt"), "epochs": len(log),
           "best_valid_exact_match": best}, args.json)
    return 0


def cmd_eval(args) -> int:
    rewriter = Rewriter.load(args.model)
    examples = [ex for ex in _read_splits(args.data) if ex.split == args.split]
    if not examples:
        raise ConvEditError(f"no examples with split={args.split!r}")
    report = evaluate(rewriter, examples).to_dict()
    if args.out:
        out = _out_dir(args)
        (out / "eval.json").write_text(
            json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _emit(report if args.json else
          {"macro_exact_match": report["macro_exact_match"],
           **{f"em[{k}]": v["exact_match"] for k, v in report["per_task"].items()}},
          args.json)
    return 0


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config, args.seed)
    out = _out_dir(args)
    _echo_config(cfg, out)
    single = _read_splits(args.single_task_data)
    comp = _read_splits(args.compositional_data)

    def factory(train_set, valid_set):
        model, _ = train(train_set, valid_set, cfg)
        return model

    points = composition_sweep(
        factory,
        [ex for ex in single if ex.split == "train"],
        [ex for ex in single if ex.split == "valid"],
        [ex for ex in comp if ex.split == "train"],
        [ex for ex in comp if ex.split == "test"],
        sizes=args.sizes,
        seed=cfg.seed,
    )
    write_sweep(points, out / "sweep.tsv")
    _emit({"out": str(out / "sweep.tsv"),
           "points": [dataclasses.asdict(p) for p in points]}, args.json)
    return 0


def cmd_bench(args) -> int:
    rewriter = Rewriter.load(args.model)
    examples = [ex for ex in _read_splits(args.data) if ex.split == "test"]
    report = latency_bench(rewriter, examples[:args.reps] if args.reps else examples)
    _emit(report.to_dict(), args.json)
    return 0


def cmd_rewrite(args) -> int:
    seq = concat_turns(args.context.split(), args.followup.split())
    if args.gold_program:
        program = EditProgram.from_dict(json.loads(Path(args.gold_program).read_text()))
    elif args.model is None:
        raise ConvEditError("rewrite needs --model or --gold-program")
    else:
        rewriter = Rewriter.load(args.model)
        program = rewriter.predict_program(seq)
    result = apply_program(seq, program)
    payload = {"rewrite": result.text(), "program": program.to_dict()}
    if args.trace:
        payload["trace"] = result.trace
    if result.warnings:
        payload["warnings"] = result.warnings
    _emit(payload if args.json else {"rewrite": payload["rewrite"],
                                     **({"trace": "\n" + "\n".join(result.trace)} if args.trace else {})},
          args.json)
    return 0


def cmd_oracle_verify(args) -> int:
    if args.data:
        return _oracle_verify_dataset(args)
    if not args.followup:
        raise ConvEditError("oracle-verify needs --data or --followup/--rewrite")
    seq = concat_turns(args.context.split(), args.followup.split())
    target = args.rewrite.split()
    active = None
    if args.use_cases:
        active = [UseCase(u) for u in args.use_cases.split(",")]
    program = derive_program_bruteforce(seq, target, active_use_cases=active)
    if program is None:
        _emit({"reachable": False}, args.json)
        return 1
    result = apply_program(seq, program)
    payload = {"reachable": True, "program": program.to_dict()}
    if args.trace:
        payload["trace"] = result.trace
    _emit(payload, args.json)
    return 0


def _oracle_verify_dataset(args) -> int:
    path = Path(args.data)
    files = sorted(path.glob("*.jsonl")) if path.is_dir() else [path]
    if not files:
        raise ConvEditError(f"no .jsonl files under {path}")
    checked = 0
    mismatches: list[str] = []
    for f in files:
        for ex in read_dataset(f):
            seq = concat_turns(ex.context, ex.followup)
            got = apply_program(seq, ex.program).tokens
            checked += 1
            if got != ex.rewrite:
                mismatches.append(ex.id)
    payload = {"checked": checked, "mismatches": len(mismatches)}
    if mismatches:
        payload["mismatched_ids"] = mismatches[:50]
    _emit(payload, args.json)
    return 1 if mismatches else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convedit",
        description="Edit-based rewriting of conversational follow-up queries.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_required=True):
        p.add_argument("--config", help="JSON file with model/training overrides")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out", required=out_required, help="output directory")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--force", action="store_true", help="overwrite a non-empty output directory")

    p = sub.add_parser("datagen", help="generate the synthetic datasets")
    common(p)
    p.add_argument("--n-per-use-case", type=int, default=10_000)
    p.add_argument("--n-compositional", type=int, default=2_000)
    p.set_defaults(func=cmd_datagen)

    p = sub.add_parser("train", help="train the tagger")
    common(p)
    p.add_argument("--data", nargs="+", required=True, help="JSONL dataset files")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="score a checkpoint on a dataset split")
    common(p, out_required=False)
    p.add_argument("--model", required=True, help="checkpoint path")
    p.add_argument("--data", nargs="+", required=True)
    p.add_argument("--split", default="test", choices=["train", "valid", "test"])
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="compositional data sweep")
    common(p)
    p.add_argument("--single-task-data", nargs="+", required=True)
    p.add_argument("--compositional-data", nargs="+", required=True)
    p.add_argument("--sizes", type=int, nargs="+", default=[0, 100, 500, 2000])
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="single-threaded latency benchmark")
    common(p, out_required=False)
    p.add_argument("--model", required=True)
    p.add_argument("--data", nargs="+", required=True)
    p.add_argument("--reps", type=int, default=0, help="cap on timed queries (0 = all)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("rewrite", help="rewrite one follow-up query")
    common(p, out_required=False)
    p.add_argument("--model", help="checkpoint path (omit with --gold-program)")
    p.add_argument("--context", default="", help="space-separated context turn")
    p.add_argument("--followup", required=True, help="space-separated follow-up turn")
    p.add_argument("--trace", action="store_true", help="print intermediate states")
    p.add_argument("--gold-program", help="apply a JSON edit program instead of a model")
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("oracle-verify", help="search for a program reaching a target rewrite")
    common(p, out_required=False)
    p.add_argument("--context", default="")
    p.add_argument("--data", help="JSONL file or directory: verify gold programs round-trip")
    p.add_argument("--followup", default="")
    p.add_argument("--rewrite", default="", help="space-separated target rewrite")
    p.add_argument("--use-cases", help="comma-separated subset to search over")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_oracle_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConvEditError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
