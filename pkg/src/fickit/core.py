"""Domain types and information/entropy primitives.

All information quantities are measured in nats. Every Monte Carlo
operation is a pure function of its inputs and a 64-bit seed: replicate
``r`` draws from an RNG stream derived from ``(seed, r)``, so results do
not depend on evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np


class FickitError(Exception):
    """Base class for errors raised by this package."""


class DensityError(FickitError):
    """A log density evaluated to a non-finite value (underflow or
    invalid parameters). Never silently propagated as +/-inf."""


class FitError(FickitError):
    """A fitting procedure failed or produced a degenerate density."""


class StructuredDataError(FickitError):
    """Resampling-style validation was requested for a family whose
    observations are not exchangeable (e.g. time series)."""


def replicate_rng(seed: int, replicate: int) -> np.random.Generator:
    """Independent RNG stream for one Monte Carlo replicate."""
    return np.random.default_rng([int(seed) % 2**63, int(replicate)])


def derive_seed(seed: int, *tags: int) -> int:
    """Derive a stable sub-seed for a named stream of a larger run."""
    ss = np.random.SeedSequence([int(seed) % 2**63, *[int(t) for t in tags]])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class Dataset:
    """An ordered block of real-valued observations.

    The observations are treated as one structured unit: no operation in
    this package permutes or subsets them implicitly.
    """

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("Dataset requires a non-empty 1-D sequence")
        if not np.all(np.isfinite(vals)):
            raise ValueError("Dataset values must all be finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def sample_size(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class ParameterVector:
    """Continuous parameter coordinates plus optional discrete tags
    (e.g. selected frequency indices of a greedy fit)."""

    coordinates: np.ndarray
    tags: Optional[tuple] = None

    def __post_init__(self):
        coords = np.atleast_1d(np.asarray(self.coordinates, dtype=float)).copy()
        coords.setflags(write=False)
        object.__setattr__(self, "coordinates", coords)
        if self.tags is not None:
            tags = tuple(int(t) for t in self.tags)
            if len(set(tags)) != len(tags):
                raise ValueError("discrete tags must be distinct")
            object.__setattr__(self, "tags", tags)

    @property
    def dimension(self) -> int:
        """Number of continuous coordinates (discrete tags excluded)."""
        return int(self.coordinates.size)


@dataclass(frozen=True)
class FittedModel:
    """A concrete distribution over datasets.

    ``log_density`` maps a Dataset to a log density in nats;
    ``sampler(sample_size, rng)`` draws a Dataset of exactly that size.
    """

    params: ParameterVector
    log_density: Callable[[Dataset], float]
    sampler: Callable[[int, np.random.Generator], Dataset]
    label: str = ""


@dataclass(frozen=True)
class MonteCarloEstimate:
    """A replayable stochastic scalar: value +/- standard error."""

    value: float
    std_error: float
    replicates: int
    seed: int

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("replicates must be positive")
        if self.std_error < 0:
            raise ValueError("std_error must be non-negative")

    @classmethod
    def from_values(cls, values: np.ndarray, seed: int) -> "MonteCarloEstimate":
        values = np.asarray(values, dtype=float)
        n = values.size
        se = float(values.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
        return cls(value=float(values.mean()), std_error=se,
                   replicates=n, seed=int(seed))


def shannon_information(data: Dataset, model: FittedModel) -> float:
    """Negative log density of the dataset under the model, in nats."""
    h = -float(model.log_density(data))
    if not np.isfinite(h):
        raise DensityError(
            "non-finite information: density underflow or invalid parameters")
    return h


def cross_entropy_mc(truth_sampler: FittedModel, eval_model: FittedModel,
                     sample_size: int, replicates: int,
                     seed: int) -> MonteCarloEstimate:
    """Monte Carlo estimate of the expected information of fresh data
    from ``truth_sampler`` scored under ``eval_model``."""
    if replicates < 2:
        raise ValueError("replicates must be >= 2")
    vals = np.empty(replicates)
    for r in range(replicates):
        rng = replicate_rng(seed, r)
        y = truth_sampler.sampler(sample_size, rng)
        try:
            vals[r] = shannon_information(y, eval_model)
        except DensityError as exc:
            raise DensityError(
                f"replicate {r} (seed {seed}): {exc}") from exc
    return MonteCarloEstimate.from_values(vals, seed)


def kl_statistic(data: Dataset, theta0: FittedModel,
                 theta: FittedModel) -> float:
    """In-sample information loss of ``theta`` relative to ``theta0``.

    Antisymmetric under swapping the two models.
    """
    return shannon_information(data, theta) - shannon_information(data, theta0)


def kl_divergence_mc(theta0: FittedModel, theta: FittedModel,
                     truth_sampler: FittedModel, sample_size: int,
                     replicates: int, seed: int) -> MonteCarloEstimate:
    """Expected information loss of ``theta`` relative to ``theta0``
    under data from ``truth_sampler``.

    Uses common random numbers: each replicate scores the same dataset
    under both models, which sharply reduces the variance of the
    difference.
    """
    if replicates < 2:
        raise ValueError("replicates must be >= 2")
    vals = np.empty(replicates)
    for r in range(replicates):
        rng = replicate_rng(seed, r)
        y = truth_sampler.sampler(sample_size, rng)
        try:
            vals[r] = kl_statistic(y, theta0, theta)
        except DensityError as exc:
            raise DensityError(
                f"replicate {r} (seed {seed}): {exc}") from exc
    return MonteCarloEstimate.from_values(vals, seed)


def error_statistic(data: Dataset, theta0: FittedModel, theta: FittedModel,
                    divergence: float) -> float:
    """Gap between the expected and the realized information loss.

    ``divergence`` is a previously computed expected loss for the same
    model pair. Averaged over datasets at the fitted parameters, this
    gap is the predictive complexity.
    """
    return float(divergence) - kl_statistic(data, theta0, theta)
