#!/usr/bin/env python3
"""Score a trained checkpoint on the held-out test splits."""

import sys

from convedit.cli import main
from convedit.edits import CANONICAL_ORDER

DATA = [f"runs/data/{uc.value}.jsonl" for uc in CANONICAL_ORDER]

if __name__ == "__main__":
    sys.exit(main([
        "eval",
        "--model", "runs/model/model.ckpt",
        "--data", *DATA,
        "--split", "test",
        "--json",
        *sys.argv[1:],
    ]))
