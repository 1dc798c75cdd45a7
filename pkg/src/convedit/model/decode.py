"""Turn head distributions into an edit program."""

from __future__ import annotations

import numpy as np

from ..edits import CANONICAL_ORDER, EditProgram, Span, Substitution, UseCaseEdits
from .network import DELETE, TAG_B, TAG_I

DELETION_THRESHOLD = 0.5


def _bio_runs(tags: np.ndarray) -> list[tuple[int, int]]:
    """Spans of B followed by Is; an I with no live run behind it is ignored."""
    runs = []
    start = None
    for t, tag in enumerate(tags):
        if tag == TAG_B:
            if start is not None:
                runs.append((start, t))
            start = t
        elif tag == TAG_I:
            if start is None:
                continue  # orphaned I, coerced to O
        else:
            if start is not None:
                runs.append((start, t))
                start = None
    if start is not None:
        runs.append((start, len(tags)))
    return runs


def decode_output(p_rd: np.ndarray, p_rr: np.ndarray, p_del: np.ndarray) -> EditProgram:
    """Greedy per-use-case decode; validation happens downstream, fail-soft."""
    U, T, _ = p_rd.shape
    per = {}
    for u, uc in enumerate(CANONICAL_ORDER):
        tags = p_rd[u].argmax(axis=-1)
        runs = _bio_runs(tags)
        sub = None
        if runs:
            best = max(runs, key=lambda r: p_rd[u, np.arange(r[0], r[1]), tags[r[0]:r[1]]].mean())
            rep = Span(best[0], best[1])
            old_start = int(p_rr[u, rep.start].argmax())
            old_end = int(p_rr[u, rep.end - 1].argmax())
            if old_start <= old_end:
                sub = Substitution(uc, rep, Span(old_start, old_end + 1))
        deletions = frozenset(int(i) for i in np.nonzero(p_del[u, :, DELETE] > DELETION_THRESHOLD)[0])
        per[uc] = UseCaseEdits(uc, sub, deletions)
    return EditProgram.build(per)
