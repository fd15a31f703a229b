#!/usr/bin/env python3
"""Unclosable-graph experiment: the shrinking family with a nonzero limit.

Example: python scripts/run_unclosable.py --n-list 5,6,7 --d 0
"""

import sys

from torspec.cli import main

if __name__ == "__main__":
    sys.exit(main(["run", "unclosable", "--out", "runs"] + sys.argv[1:]))
