"""Exhaustive small-scale search for an edit program reaching a target rewrite.

Test oracle: validates generated labels and round-trip properties against an
independent path.  Bounded to short sequences and at most two substitutions.
"""

from __future__ import annotations

import itertools
from collections import Counter

from .edits import (
    CANONICAL_ORDER,
    EditProgram,
    Span,
    Substitution,
    UseCase,
    UseCaseEdits,
    validate_program,
)
from .engine import apply_program, build_dependency_order
from .errors import BoundExceededError, CyclicDependencyError, EmptyRewriteError
from .tokens import Segment, TokenSequence

MAX_T = 24


def _candidate_spans(T: int, sep: int | None) -> list[Span]:
    out = []
    for s in range(T):
        for e in range(s + 1, T + 1):
            if sep is not None and s <= sep < e:
                continue
            out.append(Span(s, e))
    return out


def _is_infix(needle: list[str], haystack: list[str]) -> bool:
    n = len(needle)
    return any(haystack[i:i + n] == needle for i in range(len(haystack) - n + 1))


def _deletion_completion(cells, target: list[str], sub_spans: list[Span],
                         force_delete: set[int]) -> set[int] | None:
    """Find deletion ids turning the extracted cell texts into the target.

    Cells whose ids lie inside any substitution span are not deletable.
    Returns None when no assignment exists.
    """
    deletable = [
        c.id not in force_delete and not any(sp.contains_index(c.id) for sp in sub_spans)
        and c.segment is not Segment.SEP
        for c in cells
    ]
    forced = [c.id in force_delete for c in cells]
    n, m = len(cells), len(target)
    # reachable[i][k]: cells[i:] can realize target[k:]
    memo: dict[tuple[int, int], bool] = {}

    def reach(i: int, k: int) -> bool:
        if (i, k) in memo:
            return memo[(i, k)]
        if i == n:
            res = k == m
        elif forced[i]:
            res = reach(i + 1, k)
        else:
            res = False
            if k < m and cells[i].text == target[k] and reach(i + 1, k + 1):
                res = True
            elif deletable[i] and reach(i + 1, k):
                res = True
        memo[(i, k)] = res
        return res

    if not reach(0, 0):
        return None
    out: set[int] = set(force_delete)
    i = k = 0
    while i < n:
        if forced[i]:
            i += 1
            continue
        if k < m and cells[i].text == target[k] and reach(i + 1, k + 1):
            k += 1
        else:
            out.add(cells[i].id)
        i += 1
    return out


def _try_assignment(seq: TokenSequence, target: list[str],
                    subs: dict[UseCase, Substitution],
                    deletion_owner: UseCase | None) -> EditProgram | None:
    per = {uc: UseCaseEdits(uc, sub) for uc, sub in subs.items()}
    program = EditProgram.build(per)
    if not validate_program(seq, program).ok:
        return None
    try:
        order = build_dependency_order(program)
    except CyclicDependencyError:
        return None
    chain_cells = _cells_after_substitutions(seq, order)
    sub_spans = [sp for s in subs.values() for sp in (s.replacement, s.replaced)]

    sep_positions = [i for i, c in enumerate(chain_cells) if c.segment is Segment.SEP]
    attempts = []
    if sep_positions:
        tail = chain_cells[sep_positions[-1] + 1:]
        attempts.append((tail, set()))  # keep the separator
        attempts.append((chain_cells, {c.id for c in chain_cells if c.segment is Segment.SEP}))
    else:
        attempts.append((chain_cells, set()))

    for cells, forced in attempts:
        deletions = _deletion_completion(cells, target, sub_spans, forced)
        if deletions is None:
            continue
        if deletions and deletion_owner is None:
            continue
        if deletions:
            owner_edits = per.get(deletion_owner, UseCaseEdits(deletion_owner))
            per2 = dict(per)
            per2[deletion_owner] = UseCaseEdits(
                deletion_owner, owner_edits.substitution, frozenset(deletions)
            )
            candidate = EditProgram.build(per2)
        else:
            candidate = program
        if not validate_program(seq, candidate).ok:
            continue
        try:
            if apply_program(seq, candidate).tokens == target:
                return candidate
        except EmptyRewriteError:
            continue
    return None


def _cells_after_substitutions(seq: TokenSequence, order):
    from .engine import _apply_one, _build_chain
    from .tokens import TokenCell

    chain, markers = _build_chain(seq, list(order), set())
    for i, _ in enumerate(order):
        _apply_one(chain, markers, i)
    return [x for x in chain if isinstance(x, TokenCell)]


def derive_program_bruteforce(
    seq: TokenSequence,
    target: list[str],
    active_use_cases: set[UseCase] | None = None,
    budget: int = 500_000,
) -> EditProgram | None:
    """Search for some edit program whose application yields ``target``.

    Explores the empty program, single substitutions, and pairs of
    substitutions across the active use cases, completing each candidate with
    an exactly solved deletion set.  Returns None when the target is
    unreachable within the search space.
    """
    if seq.T > MAX_T:
        raise BoundExceededError(f"T={seq.T} exceeds the exhaustive search bound {MAX_T}")

    if Counter(target) - Counter(seq.texts()):
        return None  # output vocabulary is closed over the input tokens

    if active_use_cases is None:
        active_use_cases = set(CANONICAL_ORDER)
    active = sorted(active_use_cases, key=CANONICAL_ORDER.index)
    owner = active[0] if active else None
    texts = seq.texts()
    spans = _candidate_spans(seq.T, seq.sep_index)
    rep_candidates = [sp for sp in spans if _is_infix(texts[sp.start:sp.end], target)]

    found = _try_assignment(seq, target, {}, owner)
    if found is not None:
        return found

    spent = 0
    single: list[tuple[Span, Span]] = []
    for rep in rep_candidates:
        for old in spans:
            if rep.overlaps(old):
                continue
            single.append((rep, old))

    for uc in active:
        for rep, old in single:
            spent += 1
            if spent > budget:
                raise BoundExceededError("search budget exhausted")
            found = _try_assignment(seq, target, {uc: Substitution(uc, rep, old)}, owner)
            if found is not None:
                return found

    for uc_a, uc_b in itertools.combinations(active, 2):
        for rep_a, old_a in single:
            sub_a = Substitution(uc_a, rep_a, old_a)
            for rep_b, old_b in single:
                spent += 1
                if spent > budget:
                    raise BoundExceededError("search budget exhausted")
                found = _try_assignment(
                    seq, target,
                    {uc_a: sub_a, uc_b: Substitution(uc_b, rep_b, old_b)},
                    owner,
                )
                if found is not None:
                    return found
    return None
