#!/usr/bin/env python3
"""Single-threaded latency benchmark for a trained checkpoint."""

import sys

from convedit.cli import main
from convedit.edits import CANONICAL_ORDER

DATA = [f"runs/data/{uc.value}.jsonl" for uc in CANONICAL_ORDER]

if __name__ == "__main__":
    sys.exit(main([
        "bench",
        "--model", "runs/model/model.ckpt",
        "--data", *DATA,
        "--json",
        *sys.argv[1:],
    ]))
