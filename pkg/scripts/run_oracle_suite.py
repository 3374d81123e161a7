#!/usr/bin/env python3
"""Closed-form oracle checks for the Monte Carlo complexity engine.

Compares simulated complexities against the exact values for Gaussian
mean, exponential, and linear-regression families, and the extreme-value
formula against direct simulation. Exits nonzero if any check fails.
"""

import argparse
import sys

from fickit.cli import DEFAULT_SEED, main as cli_main


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/oracle")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--replicates", type=int, default=1000)
    args = parser.parse_args()
    return cli_main(["oracle-suite", "--out", args.out,
                     "--seed", str(args.seed),
                     "--replicates", str(args.replicates)])


if __name__ == "__main__":
    sys.exit(main())
