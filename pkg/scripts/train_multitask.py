#!/usr/bin/env python3
"""Train the multitask tagger on all five single-task datasets."""

import sys

from convedit.cli import main
from convedit.edits import CANONICAL_ORDER

DATA = [f"runs/data/{uc.value}.jsonl" for uc in CANONICAL_ORDER]

if __name__ == "__main__":
    sys.exit(main([
        "train",
        "--data", *DATA,
        "--out", "runs/model",
        "--seed", "0",
        "--force",
        *sys.argv[1:],
    ]))
