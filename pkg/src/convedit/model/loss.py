"""Cross-entropy training objective and its exact gradients.

The BIO and deletion losses average over use cases and sum over positions;
the pointer loss is gated on replacement existence and summed (not averaged)
over use cases.  The total is the plain sum of the three terms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ModelConfig
from .network import ForwardOutput, backward_batch

_EPS = 1e-300  # guards log(0) on pathological inputs


@dataclass
class LossBreakdown:
    rd: float
    rr: float
    deletion: float

    @property
    def total(self) -> float:
        return self.rd + self.rr + self.deletion


def _stack(labels_list, attr):
    return np.stack([getattr(lb, attr) for lb in labels_list])


def batch_loss(outputs, labels_list) -> LossBreakdown:
    """Mean per-example loss over a same-length batch."""
    B, U, T, _ = outputs["p_rd"].shape
    y_rd = _stack(labels_list, "y_rd")
    y_del = _stack(labels_list, "y_del")
    rr_mask = _stack(labels_list, "rr_mask")
    rr_qpos = _stack(labels_list, "rr_qpos")
    rr_tgt = _stack(labels_list, "rr_tgt")

    b_idx = np.arange(B)[:, None, None]
    u_idx = np.arange(U)[None, :, None]
    t_idx = np.arange(T)[None, None, :]
    l_rd = -np.log(outputs["p_rd"][b_idx, u_idx, t_idx, y_rd] + _EPS).sum(axis=2).mean(axis=1)
    l_del = -np.log(outputs["p_del"][b_idx, u_idx, t_idx, y_del] + _EPS).sum(axis=2).mean(axis=1)

    l_rr = np.zeros(B)
    for side in range(2):
        p = outputs["p_rr"][np.arange(B)[:, None], np.arange(U)[None, :],
                            rr_qpos[:, :, side], rr_tgt[:, :, side]]
        l_rr += np.where(rr_mask, -np.log(p + _EPS), 0.0).sum(axis=1)

    return LossBreakdown(float(l_rd.mean()), float(l_rr.mean()), float(l_del.mean()))


def compute_loss(output: ForwardOutput, labels) -> LossBreakdown:
    """Single-example loss from per-example distributions."""
    outputs = {
        "p_rd": output.p_rd[None],
        "p_rr": output.p_rr[None],
        "p_del": output.p_del[None],
    }
    return batch_loss(outputs, [labels])


def batch_loss_and_grads(params, outputs, cache, labels_list, config: ModelConfig):
    """Loss breakdown plus exact gradients for every trainable parameter."""
    breakdown = batch_loss(outputs, labels_list)
    B, U, T, _ = outputs["p_rd"].shape
    y_rd = _stack(labels_list, "y_rd")
    y_del = _stack(labels_list, "y_del")
    rr_mask = _stack(labels_list, "rr_mask")
    rr_qpos = _stack(labels_list, "rr_qpos")
    rr_tgt = _stack(labels_list, "rr_tgt")

    b_idx = np.arange(B)[:, None, None]
    u_idx = np.arange(U)[None, :, None]
    t_idx = np.arange(T)[None, None, :]

    # softmax+CE: d(logits) = p - onehot(y), scaled by the loss weights
    d_rd = outputs["p_rd"].copy()
    np.add.at(d_rd, (b_idx, u_idx, t_idx, y_rd), -1.0)
    d_rd /= U * B
    d_del = outputs["p_del"].copy()
    np.add.at(d_del, (b_idx, u_idx, t_idx, y_del), -1.0)
    d_del /= U * B

    d_rr = np.zeros_like(outputs["p_rr"])  # (B, U, T, T)
    for b in range(B):
        for u in range(U):
            if not rr_mask[b, u]:
                continue
            for side in range(2):
                qp = rr_qpos[b, u, side]
                row = outputs["p_rr"][b, u, qp].copy()
                row[rr_tgt[b, u, side]] -= 1.0
                d_rr[b, u, qp] += row / B

    Hd = cache["Hd"]
    dHd = np.zeros_like(Hd)
    head_grads: dict[str, np.ndarray] = {}
    for u in range(U):
        dHd += d_rd[:, u] @ params[f"rd{u}/W"].T
        head_grads[f"rd{u}/W"] = np.einsum("btd,btk->dk", Hd, d_rd[:, u])
        head_grads[f"rd{u}/b"] = d_rd[:, u].sum(axis=(0, 1))
        dHd += d_del[:, u] @ params[f"del{u}/W"].T
        head_grads[f"del{u}/W"] = np.einsum("btd,btk->dk", Hd, d_del[:, u])
        head_grads[f"del{u}/b"] = d_del[:, u].sum(axis=(0, 1))

        q, k = cache["qs"][u], cache["ks"][u]
        Wb = params[f"rr{u}/Wb"]
        dS = d_rr[:, u]
        row_sum = dS.sum(axis=2)   # (B, T)
        col_sum = dS.sum(axis=1)   # (B, T)
        dq = np.einsum("bts,bsj->btj", dS, k @ Wb.T) + row_sum[:, :, None] * params[f"rr{u}/bq"]
        dk = np.einsum("bts,btj->bsj", dS, q @ Wb) + col_sum[:, :, None] * params[f"rr{u}/bk"]
        head_grads[f"rr{u}/Wb"] = np.einsum("bti,bts,bsj->ij", q, dS, k, optimize=True)
        head_grads[f"rr{u}/bq"] = np.einsum("bt,bti->i", row_sum, q)
        head_grads[f"rr{u}/bk"] = np.einsum("bs,bsj->j", col_sum, k)
        head_grads[f"rr{u}/c"] = np.array([dS.sum()])
        head_grads[f"rr{u}/Pq"] = np.einsum("btd,bti->di", Hd, dq)
        head_grads[f"rr{u}/Pk"] = np.einsum("btd,bti->di", Hd, dk)
        dHd += dq @ params[f"rr{u}/Pq"].T + dk @ params[f"rr{u}/Pk"].T

    grads = backward_batch(params, cache, dHd, head_grads, config)
    return breakdown, grads
