"""Deterministic application of edit programs to token sequences.

Deletions are flags that travel with cells; substitutions move cells between
marker pairs installed at the original span boundaries.  This makes the final
rewrite independent of when deletion flags are applied, and makes dependent
substitutions compose: cells spliced by an earlier substitution into a region
enclosed by a later substitution's markers belong to that region.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .edits import CANONICAL_ORDER, EditProgram, Span, Substitution, UseCase, validate_program
from .errors import CyclicDependencyError, EmptyRewriteError
from .tokens import Segment, TokenCell, TokenSequence


@dataclass
class RewriteResult:
    tokens: list[str]
    trace: list[str]
    applied_order: list[UseCase]
    warnings: list[str] = field(default_factory=list)

    def text(self) -> str:
        return " ".join(self.tokens)


def dependency_edges(subs: list[Substitution]) -> set[tuple[int, int]]:
    """Edges (i, j) meaning subs[i] must be applied before subs[j].

    j waits for i when j's replacement strictly contains i's replaced (i's
    resolved content must be spliced in before j moves the region), when j's
    replaced contains i's replacement (i must move its cells out before j
    excises the region), or when j's replacement strictly contains i's
    replacement.
    """
    edges: set[tuple[int, int]] = set()
    for jj, x in enumerate(subs):
        for ii, y in enumerate(subs):
            if ii == jj:
                continue
            if x.replacement.contains(y.replaced) and x.replacement != y.replaced:
                edges.add((ii, jj))
            if x.replaced.contains(y.replacement):
                edges.add((ii, jj))
            if x.replacement.contains(y.replacement) and x.replacement != y.replacement:
                edges.add((ii, jj))
    return edges


def _kahn(subs: list[Substitution]):
    """(topological order, unresolved cycle members) with canonical tie-break."""
    edges = dependency_edges(subs)
    waiting = {j: {i for (i, jj) in edges if jj == j} for j in range(len(subs))}
    order: list[Substitution] = []
    done: set[int] = set()
    while len(done) < len(subs):
        ready = [j for j in range(len(subs))
                 if j not in done and not (waiting[j] - done)]
        if not ready:
            return order, [subs[j] for j in range(len(subs)) if j not in done]
        j = min(ready, key=lambda j: CANONICAL_ORDER.index(subs[j].use_case))
        order.append(subs[j])
        done.add(j)
    return order, []


def build_dependency_order(program: EditProgram) -> list[Substitution]:
    """Topological order of the program's substitutions.

    Independent substitutions tie-break by canonical use-case order.
    """
    order, cycle = _kahn(program.substitutions())
    if cycle:
        cyc = [s.use_case.value for s in cycle]
        raise CyclicDependencyError(f"cyclic substitution dependency among {cyc}")
    return order


class _Marker:
    __slots__ = ("sub", "kind")

    def __init__(self, sub: Substitution, kind: str):
        self.sub = sub
        self.kind = kind  # rep_start | rep_end | old_start | old_end

    def __repr__(self):  # pragma: no cover
        return f"<{self.sub.use_case.value}:{self.kind}>"


def _marker_sort_key(m: _Marker):
    span = m.sub.replacement if m.kind.startswith("rep") else m.sub.replaced
    is_end = m.kind.endswith("end")
    if is_end:
        # ends close before starts open; inner spans close first, and for
        # equal extents the replaced closes inside the replacement
        return (0, -span.start, 0 if m.kind == "old_end" else 1)
    # outer spans open first; for equal extents the replacement opens first
    return (1, -span.end, 0 if m.kind == "rep_start" else 1)


def _build_chain(seq: TokenSequence, subs: list[Substitution], deletions: set[int]):
    at: dict[int, list[_Marker]] = {}
    markers: dict[tuple[int, str], _Marker] = {}
    for i, sub in enumerate(subs):
        for kind, span in (("rep", sub.replacement), ("old", sub.replaced)):
            for suffix, pos in (("start", span.start), ("end", span.end)):
                m = _Marker(sub, f"{kind}_{suffix}")
                markers[(i, f"{kind}_{suffix}")] = m
                at.setdefault(pos, []).append(m)
    chain: list[object] = []
    for p in range(seq.T + 1):
        for m in sorted(at.get(p, []), key=_marker_sort_key):
            chain.append(m)
        if p < seq.T:
            cell = seq.cells[p].copy()
            if p in deletions:
                cell.deleted = True
            chain.append(cell)
    return chain, markers


def _apply_one(chain: list, markers, idx: int) -> None:
    o0 = chain.index(markers[(idx, "old_start")])
    o1 = chain.index(markers[(idx, "old_end")])
    # excise replaced cells permanently; markers stay where they are
    chain[o0 + 1:o1] = [x for x in chain[o0 + 1:o1] if isinstance(x, _Marker)]
    r0 = chain.index(markers[(idx, "rep_start")])
    r1 = chain.index(markers[(idx, "rep_end")])
    moved = [x for x in chain[r0 + 1:r1] if isinstance(x, TokenCell)]
    chain[r0 + 1:r1] = [x for x in chain[r0 + 1:r1] if isinstance(x, _Marker)]
    o0 = chain.index(markers[(idx, "old_start")])
    chain[o0 + 1:o0 + 1] = moved


def _linearize(chain: list) -> str:
    return " ".join(x.text for x in chain if isinstance(x, TokenCell))


def extract_rewrite(cells: list[TokenCell]) -> list[str]:
    """Final extraction: texts after the last surviving [SEP], or everything."""
    last_sep = -1
    for i, c in enumerate(cells):
        if c.segment is Segment.SEP and not c.deleted:
            last_sep = i
    out = [c.text for c in cells[last_sep + 1:] if not c.deleted]
    if not out:
        raise EmptyRewriteError("program deleted every extractable token")
    return out


def apply_program(
    seq: TokenSequence,
    program: EditProgram,
    order: list[Substitution] | None = None,
) -> RewriteResult:
    """Apply an edit program and extract the rewrite.

    Invalid edits are dropped per use case (fail-soft) with a warning record.
    An explicit substitution ``order`` may be injected for order-invariance
    testing; it must contain exactly the program's surviving substitutions.
    """
    warnings: list[str] = []
    prog = program
    report = validate_program(seq, prog)
    while not report.ok:
        dropped = report.drop_candidates()
        for v in report.violations:
            warnings.append(f"{v.code}: {v.message} (dropped {v.offender.value})")
        prog = prog.without(dropped)
        report = validate_program(seq, prog)

    if order is None:
        # mutually dependent substitutions have no coherent order; fail soft
        # by dropping the latest-canonical cycle member
        while True:
            subs, cycle = _kahn(prog.substitutions())
            if not cycle:
                break
            victim = max(cycle, key=lambda s: CANONICAL_ORDER.index(s.use_case))
            warnings.append(
                "cyclic-dependency: substitutions "
                f"{sorted(s.use_case.value for s in cycle)} form a cycle "
                f"(dropped {victim.use_case.value})")
            prog = prog.without({victim.use_case})
    else:
        if sorted(s.use_case.value for s in order) != sorted(
            s.use_case.value for s in prog.substitutions()
        ):
            raise ValueError("injected order does not match the program's substitutions")
        subs = list(order)

    chain, markers = _build_chain(seq, subs, prog.all_deletions())
    index_of = {id(s): i for i, s in enumerate(subs)}
    # markers were keyed by position in `subs`; rebuild lookup accordingly
    trace: list[str] = []
    applied: list[UseCase] = []
    for sub in subs:
        _apply_one(chain, markers, index_of[id(sub)])
        applied.append(sub.use_case)
        trace.append(_linearize(chain))
    cells = [x for x in chain if isinstance(x, TokenCell)]
    tokens = extract_rewrite(cells)
    return RewriteResult(tokens=tokens, trace=trace, applied_order=applied, warnings=warnings)
