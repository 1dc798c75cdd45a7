"""Token vocabulary with PAD/UNK/[SEP] specials."""

from __future__ import annotations

from collections import Counter

from ..tokens import SEP_TEXT

PAD, UNK = "<pad>", "<unk>"
PAD_ID, UNK_ID, SEP_ID = 0, 1, 2


class Vocabulary:
    def __init__(self, tokens: list[str]):
        specials = [PAD, UNK, SEP_TEXT]
        self.itos = specials + [t for t in tokens if t not in set(specials)]
        self.stoi = {t: i for i, t in enumerate(self.itos)}

    def __len__(self) -> int:
        return len(self.itos)

    def encode(self, tokens: list[str]) -> list[int]:
        return [self.stoi.get(t, UNK_ID) for t in tokens]

    @staticmethod
    def from_corpus(token_lists, min_count: int = 1) -> "Vocabulary":
        counts = Counter()
        for toks in token_lists:
            counts.update(toks)
        ordered = sorted(counts, key=lambda t: (-counts[t], t))
        return Vocabulary([t for t in ordered if counts[t] >= min_count])

    def to_list(self) -> list[str]:
        return list(self.itos[3:])

    @staticmethod
    def from_list(tokens: list[str]) -> "Vocabulary":
        return Vocabulary(tokens)
