#!/usr/bin/env python3
"""Random DC quadratics over the probability simplex.

Runs the six standard solver variants on seeded instances and leaves
results.csv plus per-run traces under the output directory.  Any `bench run`
flag can be appended and overrides the defaults below, e.g.

    python3 scripts/run_quadratics.py --sizes 100 --variants DCA-BPCG-WS-ES
"""

import sys

from dcfw.cli import main

DEFAULTS = [
    "run",
    "--suite", "quadratics",
    "--sizes", "10,20,30",
    "--seeds", "0,1,2,3,4",
    "--out", "bench_out/quadratics",
]

if __name__ == "__main__":
    sys.exit(main(DEFAULTS + sys.argv[1:]))
