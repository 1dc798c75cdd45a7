"""BiLSTM encoder with per-use-case BIO, biaffine pointer, and deletion heads.

Everything is plain numpy with hand-written backpropagation, so the whole
model stays deterministic, CPU-only, and checkable against finite
differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TRAINABLE_TABLE, ModelConfig

# BIO tag ids and keep/delete ids
TAG_O, TAG_B, TAG_I = 0, 1, 2
KEEP, DELETE = 0, 1


def _sigmoid(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _softmax(x, axis=-1):
    z = x - x.max(axis=axis, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=axis, keepdims=True)


def init_parameters(config: ModelConfig, vocab_size: int, rng: np.random.Generator):
    D, H, P, U = config.embed_dim, config.hidden_dim, config.rr_proj_dim, config.num_use_cases
    S = config.state_dim

    def glorot(*shape):
        bound = np.sqrt(6.0 / sum(shape[-2:]))
        return rng.uniform(-bound, bound, size=shape)

    params: dict[str, np.ndarray] = {"emb": rng.normal(0.0, 0.1, size=(vocab_size, D))}
    for d in ("f", "b"):
        params[f"lstm_{d}/Wx"] = glorot(D, 4 * H)
        params[f"lstm_{d}/Wh"] = glorot(H, 4 * H)
        params[f"lstm_{d}/b"] = np.zeros(4 * H)
    for u in range(U):
        params[f"rd{u}/W"] = glorot(S, 3)
        params[f"rd{u}/b"] = np.zeros(3)
        params[f"del{u}/W"] = glorot(S, 2)
        params[f"del{u}/b"] = np.zeros(2)
        params[f"rr{u}/Pq"] = glorot(S, P)
        params[f"rr{u}/Pk"] = glorot(S, P)
        params[f"rr{u}/Wb"] = glorot(P, P)
        params[f"rr{u}/bq"] = np.zeros(P)
        params[f"rr{u}/bk"] = np.zeros(P)
        params[f"rr{u}/c"] = np.zeros(1)
    return params


def trainable_names(params: dict, config: ModelConfig) -> list[str]:
    names = sorted(params)
    if config.embedding_mode != TRAINABLE_TABLE:
        names.remove("emb")
    return names


@dataclass
class ForwardOutput:
    """Per-example distributions; batch axes are stripped by the caller."""

    H: np.ndarray       # (T, 2*hidden)
    p_rd: np.ndarray    # (U, T, 3)
    p_rr: np.ndarray    # (U, T, T)
    p_del: np.ndarray   # (U, T, 2)


def _lstm_direction(x, Wx, Wh, b, reverse: bool):
    B, T, _ = x.shape
    H = Wh.shape[0]
    h = np.zeros((B, H))
    c = np.zeros((B, H))
    hs = np.zeros((B, T, H))
    cache = []
    steps = range(T - 1, -1, -1) if reverse else range(T)
    for t in steps:
        z = x[:, t] @ Wx + h @ Wh + b
        i = _sigmoid(z[:, :H])
        f = _sigmoid(z[:, H:2 * H])
        g = np.tanh(z[:, 2 * H:3 * H])
        o = _sigmoid(z[:, 3 * H:])
        c_prev, h_prev = c, h
        c = f * c_prev + i * g
        tc = np.tanh(c)
        h = o * tc
        hs[:, t] = h
        cache.append((t, i, f, g, o, c_prev, h_prev, tc))
    return hs, cache


def forward_batch(params, ids, config: ModelConfig, train: bool = False,
                  drop_rng: np.random.Generator | None = None):
    """Run encoder and heads on a (B, T) id matrix.

    Returns (outputs, cache); the cache carries everything backward_batch
    needs.  Dropout on the encoder states is applied only when train=True.
    """
    U = config.num_use_cases
    E = params["emb"][ids]
    hf, cache_f = _lstm_direction(E, params["lstm_f/Wx"], params["lstm_f/Wh"],
                                  params["lstm_f/b"], reverse=False)
    hb, cache_b = _lstm_direction(E, params["lstm_b/Wx"], params["lstm_b/Wh"],
                                  params["lstm_b/b"], reverse=True)
    Hs = np.concatenate([hf, hb], axis=-1)

    if train and config.dropout > 0.0:
        mask = drop_rng.random(Hs.shape) >= config.dropout
        Hd = Hs * mask / (1.0 - config.dropout)
    else:
        mask = None
        Hd = Hs

    p_rd, p_del, p_rr, qs, ks = [], [], [], [], []
    for u in range(U):
        p_rd.append(_softmax(Hd @ params[f"rd{u}/W"] + params[f"rd{u}/b"]))
        p_del.append(_softmax(Hd @ params[f"del{u}/W"] + params[f"del{u}/b"]))
        q = Hd @ params[f"rr{u}/Pq"]
        k = Hd @ params[f"rr{u}/Pk"]
        scores = (
            np.einsum("bti,ij,bsj->bts", q, params[f"rr{u}/Wb"], k, optimize=True)
            + (q @ params[f"rr{u}/bq"])[:, :, None]
            + (k @ params[f"rr{u}/bk"])[:, None, :]
            + params[f"rr{u}/c"][0]
        )
        p_rr.append(_softmax(scores, axis=-1))
        qs.append(q)
        ks.append(k)

    outputs = {
        "H": Hs,
        "p_rd": np.stack(p_rd, axis=1),    # (B, U, T, 3)
        "p_del": np.stack(p_del, axis=1),  # (B, U, T, 2)
        "p_rr": np.stack(p_rr, axis=1),    # (B, U, T, T)
    }
    cache = {
        "ids": ids, "E": E, "cache_f": cache_f, "cache_b": cache_b,
        "Hd": Hd, "mask": mask, "qs": qs, "ks": ks,
    }
    return outputs, cache


def forward_single(params, ids, config: ModelConfig) -> ForwardOutput:
    outputs, _ = forward_batch(params, np.asarray([ids]), config, train=False)
    return ForwardOutput(
        H=outputs["H"][0],
        p_rd=outputs["p_rd"][0],
        p_rr=outputs["p_rr"][0],
        p_del=outputs["p_del"][0],
    )


def _lstm_backward(dh_seq, x, Wx, Wh, cache, reverse: bool):
    B, T, _ = x.shape
    H = Wh.shape[0]
    dWx = np.zeros_like(Wx)
    dWh = np.zeros_like(Wh)
    db = np.zeros(4 * H)
    dx = np.zeros_like(x)
    dh_next = np.zeros((B, H))
    dc_next = np.zeros((B, H))
    for (t, i, f, g, o, c_prev, h_prev, tc) in reversed(cache):
        dh = dh_seq[:, t] + dh_next
        do = dh * tc
        dc = dh * o * (1.0 - tc * tc) + dc_next
        di = dc * g
        df = dc * c_prev
        dg = dc * i
        dz = np.concatenate([
            di * i * (1.0 - i),
            df * f * (1.0 - f),
            dg * (1.0 - g * g),
            do * o * (1.0 - o),
        ], axis=1)
        dWx += x[:, t].T @ dz
        dWh += h_prev.T @ dz
        db += dz.sum(axis=0)
        dx[:, t] += dz @ Wx.T
        dh_next = dz @ Wh.T
        dc_next = dc * f
    return dWx, dWh, db, dx


def backward_batch(params, cache, dHd, d_heads, config: ModelConfig):
    """Backpropagate head-score gradients into a full parameter gradient dict.

    ``dHd`` is the gradient w.r.t. the (possibly dropped-out) encoder states
    accumulated from the classification heads; ``d_heads`` maps parameter
    names to already-computed head gradients.
    """
    grads = dict(d_heads)
    Hn = config.hidden_dim
    if cache["mask"] is not None:
        dH = dHd * cache["mask"] / (1.0 - config.dropout)
    else:
        dH = dHd
    x = cache["E"]
    dWx, dWh, db, dx_f = _lstm_backward(
        dH[:, :, :Hn], x, params["lstm_f/Wx"], params["lstm_f/Wh"], cache["cache_f"], False)
    grads["lstm_f/Wx"], grads["lstm_f/Wh"], grads["lstm_f/b"] = dWx, dWh, db
    dWx, dWh, db, dx_b = _lstm_backward(
        dH[:, :, Hn:], x, params["lstm_b/Wx"], params["lstm_b/Wh"], cache["cache_b"], True)
    grads["lstm_b/Wx"], grads["lstm_b/Wh"], grads["lstm_b/b"] = dWx, dWh, db
    dE = dx_f + dx_b
    demb = np.zeros_like(params["emb"])
    np.add.at(demb, cache["ids"], dE)
    grads["emb"] = demb
    return grads
