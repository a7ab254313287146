#!/usr/bin/env python3
"""Headline competitive-race experiment: full-strength collision phase at
T = 20, L = 15, 61x61 strategy surface, best responses, stationary points,
and the joint distribution at the first equilibrium found.

    python scripts/run_race.py --out out/race [--seed 0] [--grid 61]
"""

import sys

from qwgames.cli import main

if __name__ == "__main__":
    sys.exit(main(["--recipe", "race"] + sys.argv[1:]))
