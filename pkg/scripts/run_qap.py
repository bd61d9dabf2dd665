#!/usr/bin/env python3
"""QAP relaxations over the Birkhoff polytope from a directory of .dat files.

Point --qaplib-dir at a folder of QAPLIB-format instances; files that fail to
parse are reported and skipped, and only instances with n <= max(--sizes) are
run.  Example:

    python3 scripts/run_qap.py --qaplib-dir data/qaplib --sizes 20
"""

import sys

from dcfw.cli import main

DEFAULTS = [
    "run",
    "--suite", "qap",
    "--sizes", "15",
    "--seeds", "0",
    "--variants", "DCA-BPCG-ES,DCA-BPCG-WS-ES",
    "--out", "bench_out/qap",
]

if __name__ == "__main__":
    sys.exit(main(DEFAULTS + sys.argv[1:]))
