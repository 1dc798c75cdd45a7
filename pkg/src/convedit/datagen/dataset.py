"""Labeled examples, line-delimited serialization, and corpus statistics."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..edits import EditProgram, UseCase
from ..errors import DatasetError

SPLITS = ("train", "valid", "test")


@dataclass
class LabeledExample:
    id: str
    use_cases: frozenset[UseCase]
    context: list[str]
    followup: list[str]
    rewrite: list[str]
    program: EditProgram
    split: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "use_cases": sorted(u.value for u in self.use_cases),
            "context": self.context,
            "followup": self.followup,
            "rewrite": self.rewrite,
            "split": self.split,
            "program": self.program.to_dict(),
        }

    @staticmethod
    def from_dict(d: dict) -> "LabeledExample":
        required = {"id", "use_cases", "context", "followup", "rewrite", "split", "program"}
        missing = required - d.keys()
        if missing:
            raise DatasetError(f"record missing fields: {sorted(missing)}")
        return LabeledExample(
            id=d["id"],
            use_cases=frozenset(UseCase(u) for u in d["use_cases"]),
            context=list(d["context"]),
            followup=list(d["followup"]),
            rewrite=list(d["rewrite"]),
            program=EditProgram.from_dict(d["program"]),
            split=d["split"],
        )


def write_dataset(examples: list[LabeledExample], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as f:
        for ex in examples:
            f.write(json.dumps(ex.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")


def read_dataset(path: str | Path) -> list[LabeledExample]:
    out = []
    with Path(path).open("r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                out.append(LabeledExample.from_dict(json.loads(line)))
            except (json.JSONDecodeError, DatasetError, KeyError, ValueError) as e:
                raise DatasetError(f"{path}:{lineno}: {e}") from e
    return out


def stats_report(examples: list[LabeledExample]) -> dict:
    """Mean turn lengths and the context-only token fraction of the rewrite."""
    if not examples:
        raise DatasetError("cannot compute statistics of an empty dataset")
    n = len(examples)
    ctx_lens = [len(e.context) for e in examples]
    fu_lens = [len(e.followup) for e in examples]
    rw_lens = [len(e.rewrite) for e in examples]
    context_only = 0
    rewrite_total = 0
    for e in examples:
        ctx, fu = set(e.context), set(e.followup)
        for tok in e.rewrite:
            rewrite_total += 1
            if tok in ctx and tok not in fu:
                context_only += 1
    return {
        "count": n,
        "mean_context_tokens": sum(ctx_lens) / n,
        "mean_followup_tokens": sum(fu_lens) / n,
        "mean_rewrite_tokens": sum(rw_lens) / n,
        "context_only_token_fraction": context_only / rewrite_total if rewrite_total else 0.0,
    }
