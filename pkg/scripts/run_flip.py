#!/usr/bin/env python3
"""Wavefront-flip experiment with adjustable order and dyadic range.

Example: python scripts/run_flip.py --d 0.5 --j0 5 --J 20
"""

import sys

from torspec.cli import main

if __name__ == "__main__":
    sys.exit(main(["run", "flip", "--out", "runs"] + sys.argv[1:]))
