"""End-to-end inference: tokens in, decoded program and rewrite out."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..edits import EditProgram
from ..engine import RewriteResult, apply_program
from ..errors import InvalidInputError
from ..tokens import TokenSequence, concat_turns
from .checkpoint import load_checkpoint, save_checkpoint
from .config import ModelConfig
from .decode import decode_output
from .network import ForwardOutput, forward_single
from .vocab import Vocabulary


class Rewriter:
    """Bundles parameters, vocabulary and config for single-query inference.

    ``encode_calls`` counts encoder invocations; each query must cost exactly
    one (the non-autoregressive contract).
    """

    def __init__(self, params: dict, config: ModelConfig, vocab: Vocabulary):
        self.params = params
        self.config = config
        self.vocab = vocab
        self.encode_calls = 0

    def forward(self, seq: TokenSequence) -> ForwardOutput:
        if seq.T > self.config.max_T:
            raise InvalidInputError(f"sequence length {seq.T} exceeds max_T={self.config.max_T}")
        self.encode_calls += 1
        ids = self.vocab.encode(seq.texts())
        return forward_single(self.params, ids, self.config)

    def predict_program(self, seq: TokenSequence) -> EditProgram:
        out = self.forward(seq)
        return decode_output(out.p_rd, out.p_rr, out.p_del)

    def rewrite(self, context: list[str], followup: list[str]) -> tuple[EditProgram, RewriteResult]:
        seq = concat_turns(context, followup)
        program = self.predict_program(seq)
        return program, apply_program(seq, program)

    def save(self, path: str | Path) -> None:
        save_checkpoint(self.params, self.config, self.vocab, path)

    @classmethod
    def load(cls, path: str | Path) -> "Rewriter":
        params, config, vocab = load_checkpoint(path)
        return cls(params, config, vocab)
