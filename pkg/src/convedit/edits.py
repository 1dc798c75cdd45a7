"""Edit programs: spans, substitutions, deletions and their validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .tokens import TokenSequence


class UseCase(Enum):
    INTENT = "intent"
    ENTITY = "entity"
    REPAIR = "repair"
    DISFLUENCY = "disfluency"
    STEERING = "steering"


#: fixed canonical order, used for tie-breaking and wire formats
CANONICAL_ORDER: tuple[UseCase, ...] = (
    UseCase.INTENT,
    UseCase.ENTITY,
    UseCase.REPAIR,
    UseCase.DISFLUENCY,
    UseCase.STEERING,
)


@dataclass(frozen=True, order=True)
class Span:
    """Half-open token range [start, end) over the original index space."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end <= self.start:
            raise ValueError(f"invalid span [{self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def contains(self, other: "Span") -> bool:
        return self.start <= other.start and other.end <= self.end

    def contains_index(self, i: int) -> bool:
        return self.start <= i < self.end

    def overlaps(self, other: "Span") -> bool:
        return self.start < other.end and other.start < self.end

    def indices(self) -> range:
        return range(self.start, self.end)


@dataclass(frozen=True)
class Substitution:
    use_case: UseCase
    replacement: Span
    replaced: Span


@dataclass(frozen=True)
class UseCaseEdits:
    use_case: UseCase
    substitution: Substitution | None = None
    deletions: frozenset[int] = frozenset()

    def is_empty(self) -> bool:
        return self.substitution is None and not self.deletions


def empty_edits(use_case: UseCase) -> UseCaseEdits:
    return UseCaseEdits(use_case)


@dataclass(frozen=True)
class EditProgram:
    """Exactly one UseCaseEdits per use case, in canonical order."""

    edits: tuple[UseCaseEdits, ...]

    @staticmethod
    def build(per_use_case: dict[UseCase, UseCaseEdits] | None = None) -> "EditProgram":
        per_use_case = per_use_case or {}
        return EditProgram(
            tuple(per_use_case.get(uc, empty_edits(uc)) for uc in CANONICAL_ORDER)
        )

    def get(self, uc: UseCase) -> UseCaseEdits:
        return self.edits[CANONICAL_ORDER.index(uc)]

    def substitutions(self) -> list[Substitution]:
        return [e.substitution for e in self.edits if e.substitution is not None]

    def all_deletions(self) -> set[int]:
        out: set[int] = set()
        for e in self.edits:
            out |= e.deletions
        return out

    def without(self, dropped: set[UseCase]) -> "EditProgram":
        return EditProgram(
            tuple(empty_edits(e.use_case) if e.use_case in dropped else e for e in self.edits)
        )

    def is_empty(self) -> bool:
        return all(e.is_empty() for e in self.edits)

    def to_dict(self) -> dict:
        out = {}
        for e in self.edits:
            sub = None
            if e.substitution is not None:
                sub = {
                    "replacement": [e.substitution.replacement.start, e.substitution.replacement.end],
                    "replaced": [e.substitution.replaced.start, e.substitution.replaced.end],
                }
            out[e.use_case.value] = {"substitution": sub, "deletions": sorted(e.deletions)}
        return out

    @staticmethod
    def from_dict(d: dict) -> "EditProgram":
        per: dict[UseCase, UseCaseEdits] = {}
        for uc in CANONICAL_ORDER:
            entry = d.get(uc.value)
            if entry is None:
                continue
            sub = None
            if entry.get("substitution") is not None:
                s = entry["substitution"]
                sub = Substitution(
                    uc,
                    replacement=Span(*s["replacement"]),
                    replaced=Span(*s["replaced"]),
                )
            per[uc] = UseCaseEdits(uc, sub, frozenset(entry.get("deletions", [])))
        return EditProgram.build(per)


@dataclass(frozen=True)
class Violation:
    use_cases: tuple[UseCase, ...]
    code: str
    message: str
    #: the use case to drop to resolve this violation (fail-soft policy)
    offender: UseCase


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def drop_candidates(self) -> set[UseCase]:
        return {v.offender for v in self.violations}


def _later(a: UseCase, b: UseCase) -> UseCase:
    return a if CANONICAL_ORDER.index(a) > CANONICAL_ORDER.index(b) else b


def _span_pair_ok(kind_a: str, span_a: Span, kind_b: str, span_b: Span) -> bool:
    """Cross-use-case span pair admissibility.

    Two replacements or two replaceds must be disjoint.  A replacement and a
    replaced may additionally be nested (either containing the other); this
    covers both the dependency case and the shrinking-replaced case.  Partial
    overlap is never allowed.
    """
    if not span_a.overlaps(span_b):
        return True
    if kind_a == kind_b:
        return False
    return span_a.contains(span_b) or span_b.contains(span_a)


def validate_program(seq: TokenSequence, program: EditProgram) -> ValidationReport:
    """Check every span/substitution/program invariant against the sequence.

    Reporting only: callers decide whether to raise or to drop the offending
    use case's edits and proceed.
    """
    T = seq.T
    sep = seq.sep_index
    report = ValidationReport()

    def add(ucs, code, message, offender):
        report.violations.append(Violation(tuple(ucs), code, message, offender))

    for e in program.edits:
        uc = e.use_case
        sub = e.substitution
        if sub is not None:
            for kind, span in (("replacement", sub.replacement), ("replaced", sub.replaced)):
                if span.end > T:
                    add([uc], "span-out-of-range", f"{uc.value} {kind} {span} exceeds T={T}", uc)
                elif sep is not None and span.contains_index(sep):
                    add([uc], "span-contains-sep", f"{uc.value} {kind} {span} contains [SEP]", uc)
            if sub.replacement.overlaps(sub.replaced):
                add([uc], "spans-not-disjoint",
                    f"{uc.value} replacement and replaced overlap", uc)
        bad = {i for i in e.deletions if i < 0 or i >= T}
        if bad:
            add([uc], "deletion-out-of-range", f"{uc.value} deletions {sorted(bad)} out of range", uc)

    # cross-use-case checks over the surviving structure
    subs = [e.substitution for e in program.edits if e.substitution is not None]
    for i, a in enumerate(subs):
        for b in subs[i + 1:]:
            for ka, sa in (("replacement", a.replacement), ("replaced", a.replaced)):
                for kb, sb in (("replacement", b.replacement), ("replaced", b.replaced)):
                    if not _span_pair_ok(ka, sa, kb, sb):
                        add([a.use_case, b.use_case], "span-overlap",
                            f"{a.use_case.value} {ka} {sa} and {b.use_case.value} {kb} {sb} "
                            "overlap without nesting",
                            _later(a.use_case, b.use_case))

    for e in program.edits:
        if not e.deletions:
            continue
        for other in program.edits:
            sub = other.substitution
            if sub is None:
                continue
            hit = {i for i in e.deletions
                   if sub.replacement.contains_index(i) or sub.replaced.contains_index(i)}
            if hit:
                who = "its own" if other.use_case is e.use_case else other.use_case.value
                add([e.use_case, other.use_case], "deletion-in-span",
                    f"{e.use_case.value} deletions {sorted(hit)} fall inside {who} spans",
                    e.use_case)
    return report
