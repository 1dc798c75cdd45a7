"""Synthetic dataset generation for the five use cases and their compositions."""

from __future__ import annotations

import random

from ..edits import UseCase
from ..errors import DatasetError
from .catalogs import load_catalogs
from .dataset import LabeledExample
from .templates import QueryTemplate, instantiate, load_builtin_templates

#: the reconstructed compositional challenge pairs
CHALLENGE_PAIRS = (
    frozenset({UseCase.ENTITY, UseCase.INTENT}),
    frozenset({UseCase.ENTITY, UseCase.REPAIR}),
    frozenset({UseCase.ENTITY, UseCase.STEERING}),
    frozenset({UseCase.INTENT, UseCase.DISFLUENCY}),
    frozenset({UseCase.REPAIR, UseCase.DISFLUENCY}),
)


def _split_for_index(i: int, n: int) -> str:
    # exact 8:1:1 partition by position
    if i < (n * 8) // 10:
        return "train"
    if i < (n * 9) // 10:
        return "valid"
    return "test"


def _make_example(template: QueryTemplate, catalogs, rng, ex_id, split,
                  restrict_pool=False) -> LabeledExample:
    inst = instantiate(template, catalogs, rng, restrict_pool=restrict_pool)
    return LabeledExample(
        id=ex_id,
        use_cases=template.use_cases,
        context=inst.context,
        followup=inst.followup,
        rewrite=inst.rewrite,
        program=inst.program,
        split=split,
    )


def generate_single_task(
    use_case: UseCase,
    n: int,
    seed: int,
    templates: list[QueryTemplate] | None = None,
    catalogs: dict[str, list[str]] | None = None,
) -> list[LabeledExample]:
    """Generate n single-use-case examples with an 8:1:1 split, seeded."""
    if n < 1:
        raise DatasetError("n must be >= 1")
    templates = templates if templates is not None else load_builtin_templates()
    catalogs = catalogs if catalogs is not None else load_catalogs()
    pool = [t for t in templates if t.use_cases == frozenset({use_case})]
    if not pool:
        raise DatasetError(f"no templates for use case {use_case.value}")
    rng = random.Random(seed)
    out = []
    for i in range(n):
        template = pool[i % len(pool)]
        out.append(_make_example(
            template, catalogs, rng,
            ex_id=f"{use_case.value}-{i:06d}",
            split=_split_for_index(i, n),
        ))
    return out


def generate_compositional(
    n: int,
    seed: int,
    templates: list[QueryTemplate] | None = None,
    catalogs: dict[str, list[str]] | None = None,
) -> list[LabeledExample]:
    """Generate n compositional examples.

    Test examples come exclusively from eval-pool templates (and eval-pool
    entity slices), so no test template or entity is ever seen in training.
    """
    if n < 1:
        raise DatasetError("n must be >= 1")
    templates = templates if templates is not None else load_builtin_templates()
    catalogs = catalogs if catalogs is not None else load_catalogs()
    comp = [t for t in templates if len(t.use_cases) == 2]
    bad = [t.id for t in comp if t.use_cases not in CHALLENGE_PAIRS]
    if bad:
        raise DatasetError(f"templates {bad} use an unsupported use-case pair")
    train_pool = [t for t in comp if t.pool == "train"]
    eval_pool = [t for t in comp if t.pool == "eval"]
    if not train_pool or not eval_pool:
        raise DatasetError("compositional templates must cover both pools")
    rng = random.Random(seed)
    out = []
    for i in range(n):
        split = _split_for_index(i, n)
        pool = eval_pool if split == "test" else train_pool
        template = pool[i % len(pool)]
        out.append(_make_example(
            template, catalogs, rng,
            ex_id=f"compositional-{i:06d}",
            split=split,
            restrict_pool=True,
        ))
    return out


def generate_all(
    n_per_use_case: int,
    n_compositional: int,
    seed: int,
) -> dict[str, list[LabeledExample]]:
    """All six datasets keyed by name, with per-dataset derived seeds."""
    out: dict[str, list[LabeledExample]] = {}
    for k, uc in enumerate(UseCase):
        out[uc.value] = generate_single_task(uc, n_per_use_case, seed + 1000 * (k + 1))
    out["compositional"] = generate_compositional(n_compositional, seed + 999_331)
    return out
