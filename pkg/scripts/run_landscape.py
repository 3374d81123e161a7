#!/usr/bin/env python3
"""Information landscapes of a regular and a singular 2-parameter model.

Writes surface and profile CSVs for the intercept-plus-slope reference
family (single well-defined minimum) and for the unknown-frequency sine
family at zero true amplitude (flat expected loss, rough in-sample
loss along the frequency axis).
"""

import argparse
from pathlib import Path

from fickit.cli import DEFAULT_SEED, ExperimentConfig, cmd_landscape


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/landscape")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--replicates", type=int, default=200)
    args = parser.parse_args()
    singular = ExperimentConfig(
        experiment="landscape", sample_size=100,
        replicates=args.replicates, seed=args.seed,
        landscape_family="sine_singular", landscape_truth=(0.0, 0.9),
        out_dir=str(Path(args.out) / "singular"))
    regular = ExperimentConfig(
        experiment="landscape", sample_size=100,
        replicates=args.replicates, seed=args.seed,
        landscape_family="linear_regular", landscape_truth=(0.25, 0.5),
        grid_axis1=(-0.75, 1.25, 41), grid_axis2=(-0.5, 1.5, 41),
        out_dir=str(Path(args.out) / "regular"))
    for config in (singular, regular):
        for path in cmd_landscape(config):
            print(path)


if __name__ == "__main__":
    main()
