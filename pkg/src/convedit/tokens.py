"""Token sequences: the concatenated context / separator / follow-up chain."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import InvalidInputError

SEP_TEXT = "[SEP]"


class Segment(Enum):
    CONTEXT = "context"
    SEP = "sep"
    FOLLOWUP = "followup"


@dataclass
class TokenCell:
    """One token with a stable identity.

    The id equals the token's index in the original concatenated sequence
    and never changes, no matter how the cell moves afterwards.
    """

    id: int
    text: str
    segment: Segment
    deleted: bool = False

    def copy(self) -> "TokenCell":
        return TokenCell(self.id, self.text, self.segment, self.deleted)


@dataclass
class TokenSequence:
    cells: list[TokenCell] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    @property
    def T(self) -> int:
        return len(self.cells)

    @property
    def sep_index(self) -> int | None:
        for cell in self.cells:
            if cell.segment is Segment.SEP:
                return cell.id
        return None

    def texts(self) -> list[str]:
        return [c.text for c in self.cells]

    def context_tokens(self) -> list[str]:
        return [c.text for c in self.cells if c.segment is Segment.CONTEXT]

    def followup_tokens(self) -> list[str]:
        return [c.text for c in self.cells if c.segment is Segment.FOLLOWUP]


def _check_tokens(tokens: list[str], name: str) -> None:
    for t in tokens:
        if not t or any(ch.isspace() for ch in t):
            raise InvalidInputError(f"{name} token {t!r} is empty or contains whitespace")


def concat_turns(context: list[str], followup: list[str]) -> TokenSequence:
    """Concatenate context + [SEP] + follow-up into a single cell chain.

    The separator is inserted only when the context is non-empty.
    """
    if not followup:
        raise InvalidInputError("follow-up turn must be non-empty")
    _check_tokens(context, "context")
    _check_tokens(followup, "followup")

    cells: list[TokenCell] = []
    for tok in context:
        cells.append(TokenCell(len(cells), tok, Segment.CONTEXT))
    if context:
        cells.append(TokenCell(len(cells), SEP_TEXT, Segment.SEP))
    for tok in followup:
        cells.append(TokenCell(len(cells), tok, Segment.FOLLOWUP))
    return TokenSequence(cells)
