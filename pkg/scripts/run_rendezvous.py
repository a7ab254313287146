#!/usr/bin/env python3
"""Cooperative rendezvous experiment: non-interacting baseline at T = 20,
L = 15 with a sweep over collision-phase strengths at the optimal profile,
meeting-probability and separation surfaces, and the optimal joint
distribution.

    python scripts/run_rendezvous.py --out out/rendezvous [--seed 0]
"""

import sys

from qwgames.cli import main

if __name__ == "__main__":
    sys.exit(main(["--recipe", "rendezvous"] + sys.argv[1:]))
