"""Binary checkpoint format: magic, version, JSON header, float32 LE tensors."""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from ..errors import CheckpointError
from .config import ModelConfig
from .vocab import Vocabulary

MAGIC = b"CONVEDIT-CKPT"
VERSION = 1


def save_checkpoint(params: dict, config: ModelConfig, vocab: Vocabulary,
                    path: str | Path) -> None:
    names = sorted(params)
    header = {
        "config": config.to_dict(),
        "vocab": vocab.to_list(),
        "tensors": [[n, list(params[n].shape)] for n in names],
    }
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<I", VERSION))
        f.write(struct.pack("<Q", len(blob)))
        f.write(blob)
        for n in names:
            f.write(np.ascontiguousarray(params[n], dtype="<f4").tobytes())


def load_checkpoint(path: str | Path):
    path = Path(path)
    with path.open("rb") as f:
        if f.read(len(MAGIC)) != MAGIC:
            raise CheckpointError(f"{path}: not a checkpoint file (bad magic)")
        (version,) = struct.unpack("<I", f.read(4))
        if version != VERSION:
            raise CheckpointError(f"{path}: unsupported version {version}")
        (hlen,) = struct.unpack("<Q", f.read(8))
        header = json.loads(f.read(hlen).decode("utf-8"))
        config = ModelConfig.from_dict(header["config"])
        vocab = Vocabulary.from_list(header["vocab"])
        params = {}
        for name, shape in header["tensors"]:
            count = int(np.prod(shape)) if shape else 1
            raw = f.read(4 * count)
            if len(raw) != 4 * count:
                raise CheckpointError(f"{path}: truncated tensor {name}")
            params[name] = np.frombuffer(raw, dtype="<f4").reshape(shape).astype(np.float64)
        trailing = f.read(1)
        if trailing:
            raise CheckpointError(f"{path}: trailing data after tensors")
    return params, config, vocab


def quantize_roundtrip(params: dict) -> dict:
    """Push parameters through the on-disk precision once.

    Applied at the end of training so that saving is lossless afterwards:
    evaluation before and after a save/load cycle sees identical weights.
    """
    return {k: v.astype("<f4").astype(np.float64) for k, v in params.items()}
