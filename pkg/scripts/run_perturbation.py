#!/usr/bin/env python3
"""Weak-coupling analysis at T = 10, L = 31: single-walker drift sweep,
separability residual, first-order coupling grid, Richardson convergence
table, and the non-separability certificate.

    python scripts/run_perturbation.py --out out/perturbation [--seed 0]
"""

import sys

from qwgames.cli import main

if __name__ == "__main__":
    sys.exit(main(["--recipe", "perturbation"] + sys.argv[1:]))
