"""Multitask training loop: shuffled same-length batches, Adam, early stopping."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from ..datagen.dataset import LabeledExample
from ..engine import apply_program
from ..errors import ConvEditError, EmptyRewriteError
from ..tokens import concat_turns
from .config import ModelConfig
from .checkpoint import quantize_roundtrip
from .decode import decode_output
from .labels import labels_from_program
from .loss import batch_loss_and_grads
from .network import forward_batch, init_parameters, trainable_names
from .rewriter import Rewriter
from .vocab import UNK_ID, Vocabulary


def _prepare(examples: list[LabeledExample], vocab: Vocabulary):
    prepped = []
    for ex in examples:
        seq = concat_turns(ex.context, ex.followup)
        ids = np.asarray(vocab.encode(seq.texts()), dtype=np.int64)
        prepped.append((ids, labels_from_program(seq.T, ex.program), ex))
    return prepped


def _batches(prepped, batch_size: int, rng: np.random.Generator):
    order = rng.permutation(len(prepped))
    buckets: dict[int, list[int]] = {}
    for idx in order:
        buckets.setdefault(len(prepped[idx][0]), []).append(int(idx))
    chunks = []
    for T in sorted(buckets):
        idxs = buckets[T]
        for i in range(0, len(idxs), batch_size):
            chunks.append(idxs[i:i + batch_size])
    chunk_order = rng.permutation(len(chunks))
    return [chunks[i] for i in chunk_order]


def evaluate_exact_match(rewriter_like, prepped) -> float:
    """Fraction of examples whose decoded-and-applied rewrite is exact."""
    params, config = rewriter_like.params, rewriter_like.config
    hits = 0
    buckets: dict[int, list[int]] = {}
    for i, (ids, _, _) in enumerate(prepped):
        buckets.setdefault(len(ids), []).append(i)
    for T, idxs in buckets.items():
        for i in range(0, len(idxs), config.batch_size):
            chunk = idxs[i:i + config.batch_size]
            mat = np.stack([prepped[j][0] for j in chunk])
            outputs, _ = forward_batch(params, mat, config, train=False)
            for row, j in enumerate(chunk):
                ex = prepped[j][2]
                program = decode_output(
                    outputs["p_rd"][row], outputs["p_rr"][row], outputs["p_del"][row])
                seq = concat_turns(ex.context, ex.followup)
                try:
                    result = apply_program(seq, program)
                except EmptyRewriteError:
                    continue
                hits += result.tokens == ex.rewrite
    return hits / len(prepped) if prepped else 0.0


def train(
    train_examples: list[LabeledExample],
    valid_examples: list[LabeledExample],
    config: ModelConfig,
    log_path: str | Path | None = None,
    target_em: float | None = None,
) -> tuple[Rewriter, list[dict]]:
    """Train a tagger; returns the best-by-validation model and the epoch log."""
    if not train_examples:
        raise ConvEditError("training dataset is empty")
    vocab = Vocabulary.from_corpus(
        [ex.context + ex.followup for ex in train_examples])
    rng = np.random.default_rng(config.seed)
    params = init_parameters(config, len(vocab), rng)
    names = trainable_names(params, config)
    adam_m = {n: np.zeros_like(params[n]) for n in names}
    adam_v = {n: np.zeros_like(params[n]) for n in names}
    b1, b2, eps = config.adam_beta1, config.adam_beta2, config.adam_eps
    step = 0

    prepped_train = _prepare(train_examples, vocab)
    prepped_valid = _prepare(valid_examples, vocab)

    log: list[dict] = []
    best_em = -1.0
    best_params = None
    epochs_since_best = 0
    first_loss = last_loss = None

    for epoch in range(1, config.max_epochs + 1):
        sums = np.zeros(3)
        nb = 0
        for chunk in _batches(prepped_train, config.batch_size, rng):
            ids = np.stack([prepped_train[j][0] for j in chunk])
            labels = [prepped_train[j][1] for j in chunk]
            if config.unk_dropout > 0.0:
                drop = (rng.random(ids.shape) < config.unk_dropout) & (ids > UNK_ID + 1)
                ids = np.where(drop, UNK_ID, ids)
            outputs, cache = forward_batch(params, ids, config, train=True, drop_rng=rng)
            breakdown, grads = batch_loss_and_grads(params, outputs, cache, labels, config)
            if not math.isfinite(breakdown.total):
                raise ConvEditError(f"training diverged at epoch {epoch} (loss={breakdown.total})")
            step += 1
            lr_t = config.learning_rate * math.sqrt(1 - b2 ** step) / (1 - b1 ** step)
            for n in names:
                g = grads[n]
                adam_m[n] = b1 * adam_m[n] + (1 - b1) * g
                adam_v[n] = b2 * adam_v[n] + (1 - b2) * g * g
                params[n] -= lr_t * adam_m[n] / (np.sqrt(adam_v[n]) + eps)
            sums += (breakdown.rd, breakdown.rr, breakdown.deletion)
            nb += 1
        mean_rd, mean_rr, mean_del = sums / max(nb, 1)
        total = mean_rd + mean_rr + mean_del
        if first_loss is None:
            first_loss = total
        last_loss = total

        snapshot = Rewriter(params, config, vocab)
        valid_em = evaluate_exact_match(snapshot, prepped_valid) if prepped_valid else 0.0
        record = {
            "epoch": epoch,
            "L_RD": mean_rd, "L_RR": mean_rr, "L_Del": mean_del, "L": total,
            "valid_exact_match": valid_em,
        }
        log.append(record)
        if log_path is not None:
            with Path(log_path).open("a", encoding="utf-8") as f:
                f.write(json.dumps(record) + "\n")

        if valid_em > best_em:
            best_em = valid_em
            best_params = {k: v.copy() for k, v in params.items()}
            epochs_since_best = 0
        else:
            epochs_since_best += 1
            if epochs_since_best >= config.patience:
                break

        if target_em is not None and best_em >= target_em:
            break

    final = quantize_roundtrip(best_params if best_params is not None else params)
    return Rewriter(final, config, vocab), log
