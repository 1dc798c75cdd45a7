"""Model and training configuration."""

from __future__ import annotations

from dataclasses import dataclass, field, fields

TRAINABLE_TABLE = "trainable_table"
FROZEN_EXTERNAL = "frozen_external"


@dataclass
class ModelConfig:
    num_use_cases: int = 5
    embed_dim: int = 192
    hidden_dim: int = 128
    rr_proj_dim: int = 128
    dropout: float = 0.2
    learning_rate: float = 6e-4
    batch_size: int = 64
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    max_T: int = 64
    seed: int = 0
    embedding_mode: str = TRAINABLE_TABLE
    # replace a non-special token by UNK with this probability during
    # training; gives the tagger something to do with unseen entities
    unk_dropout: float = 0.1
    max_epochs: int = 30
    patience: int = 5

    def __post_init__(self):
        for name in ("num_use_cases", "embed_dim", "hidden_dim", "rr_proj_dim",
                     "batch_size", "max_T"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not (0.0 <= self.dropout < 1.0):
            raise ValueError("dropout must be in [0, 1)")
        if self.embedding_mode not in (TRAINABLE_TABLE, FROZEN_EXTERNAL):
            raise ValueError(f"unknown embedding mode {self.embedding_mode!r}")

    @property
    def state_dim(self) -> int:
        return 2 * self.hidden_dim

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @staticmethod
    def from_dict(d: dict) -> "ModelConfig":
        known = {f.name for f in fields(ModelConfig)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return ModelConfig(**d)
