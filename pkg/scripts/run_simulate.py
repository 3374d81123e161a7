#!/usr/bin/env python3
"""Simulate the seasonal-intensity dataset and export its Fourier
coefficients alongside the generator's."""

import argparse

from fickit.cli import DEFAULT_SEED, ExperimentConfig, cmd_simulate


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/simulate")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--sample-size", type=int, default=100)
    args = parser.parse_args()
    config = ExperimentConfig(experiment="simulate",
                              sample_size=args.sample_size, seed=args.seed,
                              out_dir=args.out)
    for path in cmd_simulate(config):
        print(path)


if __name__ == "__main__":
    main()
