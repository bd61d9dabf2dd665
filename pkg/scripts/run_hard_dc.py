#!/usr/bin/env python3
"""Exponential/logistic DC family over the k-sparse polytope.

These instances are built to stress the solvers: the curvature mismatch
between the two convex parts makes plain FW subsolves grind, which is where
warm starts and the adaptive stop pay off.  Sizes must be at least 10.
Append any `bench run` flag to override the defaults.
"""

import sys

from dcfw.cli import main

DEFAULTS = [
    "run",
    "--suite", "hard",
    "--sizes", "20,50",
    "--seeds", "0,1,2,3,4",
    "--out", "bench_out/hard",
]

if __name__ == "__main__":
    sys.exit(main(DEFAULTS + sys.argv[1:]))
