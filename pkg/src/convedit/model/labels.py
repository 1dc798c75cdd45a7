"""Gold label tensors derived from edit programs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..edits import CANONICAL_ORDER, EditProgram
from .network import DELETE, TAG_B, TAG_I


@dataclass
class LabelTensors:
    y_rd: np.ndarray      # (U, T) int, BIO tags
    y_del: np.ndarray     # (U, T) int, keep/delete
    rr_mask: np.ndarray   # (U,) bool, replacement exists
    rr_qpos: np.ndarray   # (U, 2) int, replacement start / last-token positions
    rr_tgt: np.ndarray    # (U, 2) int, replaced start / last-token positions


def labels_from_program(T: int, program: EditProgram) -> LabelTensors:
    U = len(CANONICAL_ORDER)
    y_rd = np.zeros((U, T), dtype=np.int64)
    y_del = np.zeros((U, T), dtype=np.int64)
    rr_mask = np.zeros(U, dtype=bool)
    rr_qpos = np.zeros((U, 2), dtype=np.int64)
    rr_tgt = np.zeros((U, 2), dtype=np.int64)
    for u, uc in enumerate(CANONICAL_ORDER):
        edits = program.get(uc)
        for i in edits.deletions:
            y_del[u, i] = DELETE
        sub = edits.substitution
        if sub is None:
            continue
        rep, old = sub.replacement, sub.replaced
        y_rd[u, rep.start] = TAG_B
        y_rd[u, rep.start + 1:rep.end] = TAG_I
        rr_mask[u] = True
        rr_qpos[u] = (rep.start, rep.end - 1)
        rr_tgt[u] = (old.start, old.end - 1)
    return LabelTensors(y_rd, y_del, rr_mask, rr_qpos, rr_tgt)


def onehot_output_from_labels(labels: LabelTensors, T: int):
    """Synthesize perfectly confident head outputs matching the labels.

    Used for the decode/label inversion property: decoding these outputs must
    recover the original program's substitutions and deletions.
    """
    U = labels.y_rd.shape[0]
    p_rd = np.zeros((U, T, 3))
    p_del = np.zeros((U, T, 2))
    p_rr = np.full((U, T, T), 1.0 / T)
    for u in range(U):
        p_rd[u, np.arange(T), labels.y_rd[u]] = 1.0
        p_del[u, np.arange(T), labels.y_del[u]] = 1.0
        if labels.rr_mask[u]:
            for side in range(2):
                q = labels.rr_qpos[u, side]
                p_rr[u, q] = 0.0
                p_rr[u, q, labels.rr_tgt[u, side]] = 1.0
    return p_rd, p_rr, p_del
