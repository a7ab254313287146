#!/usr/bin/env python3
"""Gradient-learning dynamics on the race: own-payoff gradient field over the
strategy square plus trajectories from a ring of perturbed starts around the
first stationary point.

    python scripts/run_learning.py --out out/learning [--seed 0]
"""

import sys

from qwgames.cli import main

if __name__ == "__main__":
    sys.exit(main(["--recipe", "learning"] + sys.argv[1:]))
