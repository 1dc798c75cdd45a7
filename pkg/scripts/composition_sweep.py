#!/usr/bin/env python3
"""Sweep the amount of compositional training data mixed into the single tasks."""

import sys

from convedit.cli import main
from convedit.edits import CANONICAL_ORDER

SINGLE = [f"runs/data/{uc.value}.jsonl" for uc in CANONICAL_ORDER]

if __name__ == "__main__":
    sys.exit(main([
        "sweep",
        "--single-task-data", *SINGLE,
        "--compositional-data", "runs/data/compositional.jsonl",
        "--sizes", "0", "100", "500", "2000",
        "--out", "runs/sweep",
        "--seed", "0",
        "--force",
        *sys.argv[1:],
    ]))
