#!/usr/bin/env python3
"""Extreme-value approximation vs simulated chi-squared maxima.

Tabulates 2 log m + (nu - 2) log log m against the Monte Carlo expected
maximum of m independent chi-squared(nu) draws over a grid of m and nu.
"""

import argparse

from fickit.cli import DEFAULT_SEED, ExperimentConfig, cmd_evt_table


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/evt")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--replicates", type=int, default=100_000)
    args = parser.parse_args()
    config = ExperimentConfig(experiment="evt_table",
                              replicates=args.replicates, seed=args.seed,
                              out_dir=args.out)
    for path in cmd_evt_table(config):
        print(path)


if __name__ == "__main__":
    main()
