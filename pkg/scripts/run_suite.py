#!/usr/bin/env python3
"""Run the full experiment suite into ./runs (exit 0 iff every verdict passes)."""

import sys

from torspec.cli import main

if __name__ == "__main__":
    sys.exit(main(["suite", "--out", "runs", "--emit-plots"] + sys.argv[1:]))
