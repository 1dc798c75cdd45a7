#!/usr/bin/env python3
"""Generate the six JSONL datasets plus a stats report under data/."""

import sys

from convedit.cli import main

if __name__ == "__main__":
    sys.exit(main([
        "datagen",
        "--out", "runs/data",
        "--seed", "0",
        "--n-per-use-case", "10000",
        "--n-compositional", "2000",
        "--force",
        *sys.argv[1:],
    ]))
