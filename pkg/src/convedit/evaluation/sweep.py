"""Compositional-generalization sweep over mixed-in compositional training data."""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from ..datagen.dataset import LabeledExample
from ..errors import ConvEditError
from .metrics import evaluate


@dataclass
class SweepPoint:
    size: int
    compositional_exact_match: float
    single_task_exact_match: float


def composition_sweep(
    model_factory,
    single_task_train: list[LabeledExample],
    single_task_valid: list[LabeledExample],
    comp_train: list[LabeledExample],
    comp_test: list[LabeledExample],
    sizes: list[int],
    seed: int = 0,
) -> list[SweepPoint]:
    """Train once per mix size and score the compositional test split.

    ``model_factory(train, valid)`` must return a trained rewriter.  Size 0
    measures zero-shot composition: the model has only seen single-task data.
    """
    if any(s < 0 or s > len(comp_train) for s in sizes):
        raise ConvEditError(
            f"sweep sizes must lie in [0, {len(comp_train)}], got {sizes}")
    points = []
    for size in sizes:
        rng = random.Random(seed + size)
        mixed = list(single_task_train)
        if size:
            mixed += rng.sample(comp_train, size)
        rng.shuffle(mixed)
        model = model_factory(mixed, single_task_valid)
        comp_em = evaluate(model, comp_test).macro_exact_match
        single_em = evaluate(model, single_task_valid).macro_exact_match
        points.append(SweepPoint(size, comp_em, single_em))
    return points


def write_sweep(points: list[SweepPoint], path: str | Path) -> None:
    """Plot-ready two-column table (size, compositional exact match)."""
    lines = ["# size\tcompositional_exact_match\tsingle_task_exact_match"]
    for p in points:
        lines.append(
            f"{p.size}\t{p.compositional_exact_match:.4f}\t{p.single_task_exact_match:.4f}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
