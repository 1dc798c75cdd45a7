"""Exact-match scoring and per-task evaluation reports."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..datagen.dataset import LabeledExample
from ..edits import CANONICAL_ORDER, UseCase
from ..engine import apply_program
from ..errors import EmptyRewriteError
from ..tokens import concat_turns

FAILURE_CATEGORIES = (
    "wrong_substitution",
    "wrong_deletion",
    "dropped_edit",
    "extraction_error",
)


@dataclass
class TaskResult:
    size: int
    exact: int
    failures: Counter = field(default_factory=Counter)

    @property
    def exact_match(self) -> float:
        return self.exact / self.size if self.size else 0.0


@dataclass
class EvalReport:
    per_task: dict[str, TaskResult]

    @property
    def macro_exact_match(self) -> float:
        if not self.per_task:
            return 0.0
        return sum(r.exact_match for r in self.per_task.values()) / len(self.per_task)

    def to_dict(self) -> dict:
        return {
            "macro_exact_match": self.macro_exact_match,
            "per_task": {
                name: {
                    "size": r.size,
                    "exact_match": r.exact_match,
                    "failures": dict(r.failures),
                }
                for name, r in self.per_task.items()
            },
        }


def task_name(use_cases: frozenset[UseCase]) -> str:
    return "+".join(uc.value for uc in CANONICAL_ORDER if uc in use_cases)


def exact_match(predicted: list[str], gold: list[str]) -> bool:
    """Case-sensitive match on the space-joined token sequences."""
    return " ".join(predicted) == " ".join(gold)


def _classify_failure(ex: LabeledExample, predicted, gold) -> str:
    """Attribute a miss to the first differing edit component."""
    for uc_pred, uc_gold in zip(predicted, gold):
        sp, sg = uc_pred.substitution, uc_gold.substitution
        if sg is not None and sp is None:
            return "dropped_edit"
        if sp != sg:
            return "wrong_substitution"
        if uc_pred.deletions != uc_gold.deletions:
            return "wrong_deletion"
    return "wrong_deletion"


def evaluate(rewriter, examples: list[LabeledExample]) -> EvalReport:
    """Score a model per task name; failure counts partition the misses."""
    per_task: dict[str, TaskResult] = {}
    for ex in examples:
        task = task_name(ex.use_cases)
        result = per_task.setdefault(task, TaskResult(size=0, exact=0))
        result.size += 1
        seq = concat_turns(ex.context, ex.followup)
        program = rewriter.predict_program(seq)
        try:
            applied = apply_program(seq, program)
        except EmptyRewriteError:
            result.failures["extraction_error"] += 1
            continue
        if exact_match(applied.tokens, ex.rewrite):
            result.exact += 1
        else:
            result.failures[_classify_failure(
                ex, program.edits, ex.program.edits)] += 1
    return EvalReport(per_task=per_task)
