#!/usr/bin/env python3
"""Complexity-vs-nesting curves at N=1000.

Sweeps both selection algorithms with the true-generator oracle enabled,
exposing the sequential slope-1 behavior and the greedy transition from
slope 1 to slope 2 log N once selection happens among noise modes.
"""

import argparse

from fickit.cli import DEFAULT_SEED, ExperimentConfig, cmd_sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/curves")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--replicates", type=int, default=500)
    args = parser.parse_args()
    config = ExperimentConfig(experiment="neutrino_sweep", sample_size=1000,
                              replicates=args.replicates, seed=args.seed,
                              n_max=8, truth_known=True, out_dir=args.out)
    for path in cmd_sweep(config):
        print(path)


if __name__ == "__main__":
    main()
