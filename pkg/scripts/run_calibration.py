#!/usr/bin/env python3
"""Calibration search over boundary rules and initial-coin choices for all
three headline games, ranked by distance to the published target equilibria.
Runs candidates in parallel; control the worker count with --workers or
QWG_WORKERS.

    python scripts/run_calibration.py --out out/calibration [--workers 8]
"""

import sys

from qwgames.cli import main

if __name__ == "__main__":
    sys.exit(main(["--recipe", "calibrate"] + sys.argv[1:]))
