"""Bundled model families: exact MLE fits, samplers, Fisher matrices,
and the Fourier time-series regression experiment (sequential and
greedy mode selection)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .analytic import FisherMatrix
from .core import (Dataset, FitError, FittedModel, ParameterVector,
                   StructuredDataError)

LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class ModelFamily:
    """A fitting contract: a deterministic procedure that turns a
    Dataset into a FittedModel.

    ``structured_data`` marks families whose observations are not
    exchangeable; resampling-style validation refuses them.
    ``model_at`` builds the candidate distribution at explicit
    parameters; ``fisher_at(params, sample_size)`` gives the Fisher
    matrix of the corresponding N-observation problem.
    """

    family_id: str
    fit: Callable[[Dataset], FittedModel]
    n_params: int
    structured_data: bool = False
    model_at: Optional[Callable[[ParameterVector], FittedModel]] = None
    fisher_at: Optional[Callable[[ParameterVector, int], FisherMatrix]] = None


def _gaussian_logpdf_sum(residuals: np.ndarray) -> float:
    return float(-0.5 * residuals.size * LOG_2PI - 0.5 * (residuals ** 2).sum())


def _block_sizes(n: int, k: int) -> np.ndarray:
    if n < k:
        raise ValueError("need at least one observation per mean block")
    sizes = np.full(k, n // k)
    sizes[:n % k] += 1
    return sizes


def gaussian_mean_model(means: np.ndarray, label: str = "") -> FittedModel:
    """Unit-variance normal blocks around the given per-block means.

    A dataset of size n is split into len(means) contiguous blocks of
    near-equal size (the leading blocks absorb any remainder).
    """
    means = np.atleast_1d(np.asarray(means, dtype=float))
    k = means.size

    def log_density(data: Dataset) -> float:
        mu = np.repeat(means, _block_sizes(data.sample_size, k))
        return _gaussian_logpdf_sum(data.values - mu)

    def sampler(n: int, rng: np.random.Generator) -> Dataset:
        mu = np.repeat(means, _block_sizes(n, k))
        return Dataset(mu + rng.standard_normal(n))

    return FittedModel(ParameterVector(means), log_density, sampler, label)


def gaussian_mean_family(K: int) -> ModelFamily:
    """K block means with known unit variance; the regular reference
    family with complexity exactly K at every sample size."""
    if K < 1:
        raise ValueError("K must be >= 1")

    def fit(data: Dataset) -> FittedModel:
        bounds = np.cumsum(_block_sizes(data.sample_size, K))[:-1]
        means = [b.mean() for b in np.split(data.values, bounds)]
        return gaussian_mean_model(means)

    def model_at(params: ParameterVector) -> FittedModel:
        if params.dimension != K:
            raise ValueError("parameter dimension must equal K")
        return gaussian_mean_model(params.coordinates)

    def fisher_at(params: ParameterVector, sample_size: int) -> FisherMatrix:
        return FisherMatrix(np.diag(_block_sizes(sample_size, K)
                                    .astype(float)))

    return ModelFamily(f"gaussian_mean_k{K}", fit, n_params=K,
                       model_at=model_at, fisher_at=fisher_at)


def _regression_model(design: np.ndarray, beta: np.ndarray,
                      variance: float) -> FittedModel:
    mean = design @ beta
    n = design.shape[0]
    params = ParameterVector(np.concatenate([beta, [variance]]))

    def log_density(data: Dataset) -> float:
        if data.sample_size != n:
            raise ValueError("data length must match the design matrix")
        resid = data.values - mean
        return float(-0.5 * n * (LOG_2PI + math.log(variance))
                     - 0.5 * (resid ** 2).sum() / variance)

    def sampler(m: int, rng: np.random.Generator) -> Dataset:
        if m != n:
            raise ValueError("sample size must match the design matrix")
        return Dataset(mean + math.sqrt(variance) * rng.standard_normal(n))

    return FittedModel(params, log_density, sampler)


def linear_regression_family(design: np.ndarray) -> ModelFamily:
    """Linear least-squares regression with unknown noise variance.

    The parameter count includes the variance, matching the small-sample
    corrected criterion convention.
    """
    design = np.atleast_2d(np.asarray(design, dtype=float))
    n, p = design.shape
    if np.linalg.matrix_rank(design) < p:
        raise ValueError("design matrix must have full column rank")
    if n <= p + 2:
        raise ValueError("need N > K + 1 observations (K = p + 1)")
    gram_inv = np.linalg.inv(design.T @ design)

    def fit(data: Dataset) -> FittedModel:
        if data.sample_size != n:
            raise ValueError("data length must match the design matrix")
        beta, *_ = np.linalg.lstsq(design, data.values, rcond=None)
        resid = data.values - design @ beta
        variance = float((resid ** 2).sum() / n)
        if variance <= 0.0:
            raise FitError("zero residual variance: degenerate density")
        return _regression_model(design, beta, variance)

    def model_at(params: ParameterVector) -> FittedModel:
        coords = params.coordinates
        if coords.size != p + 1:
            raise ValueError("expected p coefficients plus a variance")
        variance = float(coords[-1])
        if variance <= 0.0:
            raise ValueError("variance must be positive")
        return _regression_model(design, coords[:-1], variance)

    def fisher_at(params: ParameterVector, sample_size: int) -> FisherMatrix:
        variance = float(params.coordinates[-1])
        block = np.zeros((p + 1, p + 1))
        block[:p, :p] = design.T @ design / variance
        block[p, p] = sample_size / (2.0 * variance ** 2)
        return FisherMatrix(block)

    return ModelFamily(f"linear_regression_n{n}_p{p}", fit, n_params=p + 1,
                       model_at=model_at, fisher_at=fisher_at)


def exponential_model(rate: float) -> FittedModel:
    if rate <= 0.0:
        raise ValueError("rate must be positive")

    def log_density(data: Dataset) -> float:
        if np.any(data.values <= 0.0):
            return -np.inf
        return float(data.sample_size * math.log(rate)
                     - rate * data.values.sum())

    def sampler(n: int, rng: np.random.Generator) -> Dataset:
        return Dataset(rng.exponential(1.0 / rate, n))

    return FittedModel(ParameterVector([rate]), log_density, sampler)


def exponential_family() -> ModelFamily:
    """One-parameter exponential distribution, MLE rate = N / sum(x)."""

    def fit(data: Dataset) -> FittedModel:
        if np.any(data.values <= 0.0):
            raise FitError("exponential data must be strictly positive")
        return exponential_model(data.sample_size / float(data.values.sum()))

    def model_at(params: ParameterVector) -> FittedModel:
        return exponential_model(float(params.coordinates[0]))

    def fisher_at(params: ParameterVector, sample_size: int) -> FisherMatrix:
        rate = float(params.coordinates[0])
        return FisherMatrix(np.array([[sample_size / rate ** 2]]))

    return ModelFamily("exponential", fit, n_params=1,
                       model_at=model_at, fisher_at=fisher_at)


def fixed_family(model: FittedModel, family_id: str = "fixed") -> ModelFamily:
    """Zero-parameter family: fitting always returns the given model."""
    return ModelFamily(family_id, fit=lambda data: model, n_params=0,
                       model_at=lambda params: model)


# ---------------------------------------------------------------------------
# Neutrino-intensity Fourier regression experiment
# ---------------------------------------------------------------------------

def neutrino_mean(N: int) -> np.ndarray:
    """Seasonal mean intensity over one period, sampled at j = 1..N."""
    j = np.arange(1, N + 1)
    return np.sqrt(120.0 + 100.0 * np.sin(2.0 * np.pi * j / N + np.pi / 6.0))


def neutrino_truth(N: int) -> FittedModel:
    """Independent unit-variance normal intensities around the seasonal
    mean; the data-generating process of the Fourier experiment."""
    if N < 2 or N % 2:
        raise ValueError("N must be even and >= 2")
    mu = neutrino_mean(N)

    def log_density(data: Dataset) -> float:
        if data.sample_size != N:
            raise ValueError("data length must equal N")
        return _gaussian_logpdf_sum(data.values - mu)

    def sampler(n: int, rng: np.random.Generator) -> Dataset:
        if n != N:
            raise ValueError("sample size must equal N")
        return Dataset(mu + rng.standard_normal(N))

    return FittedModel(ParameterVector(mu), log_density, sampler,
                       label=f"neutrino_truth_N{N}")


def fourier_indices(N: int) -> np.ndarray:
    """Signed mode index for each position of the coefficient layout.

    Layout: position p holds mode p for p = 0..N/2 (constant, cosines,
    Nyquist) and mode p - N for p > N/2 (sines), so Python negative
    indexing addresses sine modes directly.
    """
    pos = np.arange(N)
    return np.where(pos <= N // 2, pos, pos - N)


def fourier_transform(data) -> np.ndarray:
    """Orthonormal real Fourier coefficients of an even-length series.

    Unit-variance white noise maps to independent unit-variance
    coefficients; the inverse transform reconstructs the data exactly.
    """
    x = data.values if isinstance(data, Dataset) else np.asarray(data, float)
    N = x.size
    if N % 2:
        raise ValueError("orthonormal Fourier basis requires even N")
    r = np.fft.rfft(x)
    c = np.empty(N)
    c[0] = r[0].real / math.sqrt(N)
    c[1:N // 2] = math.sqrt(2.0 / N) * r[1:N // 2].real
    c[N // 2] = r[N // 2].real / math.sqrt(N)
    if N > 2:
        c[N // 2 + 1:] = -math.sqrt(2.0 / N) * r[1:N // 2].imag[::-1]
    return c


def inverse_fourier_transform(coeffs: np.ndarray) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    N = c.size
    if N % 2:
        raise ValueError("orthonormal Fourier basis requires even N")
    r = np.zeros(N // 2 + 1, dtype=complex)
    r[0] = c[0] * math.sqrt(N)
    if N > 2:
        r[1:N // 2] = (c[1:N // 2] * math.sqrt(N / 2.0)
                       - 1j * math.sqrt(N / 2.0) * c[N // 2 + 1:][::-1])
    r[N // 2] = c[N // 2] * math.sqrt(N)
    return np.fft.irfft(r, N)


def _fourier_model(coeffs: np.ndarray, selected: np.ndarray,
                   tags=None) -> FittedModel:
    N = coeffs.size
    mean = inverse_fourier_transform(coeffs)
    params = ParameterVector(coeffs[selected], tags=tags)

    def log_density(data: Dataset) -> float:
        if data.sample_size != N:
            raise ValueError("data length must equal N")
        return _gaussian_logpdf_sum(data.values - mean)

    def sampler(n: int, rng: np.random.Generator) -> Dataset:
        if n != N:
            raise ValueError("sample size must equal N")
        return Dataset(mean + rng.standard_normal(N))

    return FittedModel(params, log_density, sampler)


def _sequential_positions(n: int, N: int) -> np.ndarray:
    pos = [0]
    for k in range(1, n + 1):
        pos.extend([k, N - k])
    return np.array(pos, dtype=int)


def sequential_fourier_family(n: int, N: int) -> ModelFamily:
    """Keep the constant mode plus the n lowest frequencies (both the
    cosine and sine coefficient of each); zero everything else."""
    if N % 2 or N < 2:
        raise ValueError("N must be even and >= 2")
    if not 0 <= n <= N // 2 - 1:
        raise ValueError("nesting index out of range")
    sel = _sequential_positions(n, N)

    def fit(data: Dataset) -> FittedModel:
        c = fourier_transform(data)
        kept = np.zeros(N)
        kept[sel] = c[sel]
        return _fourier_model(kept, sel)

    def model_at(params: ParameterVector) -> FittedModel:
        if params.dimension != sel.size:
            raise ValueError("parameter dimension mismatch")
        kept = np.zeros(N)
        kept[sel] = params.coordinates
        return _fourier_model(kept, sel)

    def fisher_at(params: ParameterVector, sample_size: int) -> FisherMatrix:
        # Orthonormal coefficients of unit-variance data: unit Fisher.
        return FisherMatrix(np.eye(sel.size))

    return ModelFamily(f"sequential_fourier_n{n}_N{N}", fit,
                       n_params=2 * n + 1, structured_data=True,
                       model_at=model_at, fisher_at=fisher_at)


def greedy_selection(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Positions of the constant mode plus the n largest-magnitude
    remaining coefficients.

    Ties break toward the smaller absolute mode index, positive first,
    so the selection is a pure function of the coefficients.
    """
    N = coeffs.size
    idx = fourier_indices(N)
    order = np.lexsort((idx < 0, np.abs(idx), -np.abs(coeffs)))
    order = order[order != 0]
    return np.concatenate(([0], order[:n]))


def greedy_fourier_family(n: int, N: int) -> ModelFamily:
    """Keep the constant mode plus the n largest-magnitude coefficients,
    re-running the full selection on every dataset it is fit to."""
    if N % 2 or N < 2:
        raise ValueError("N must be even and >= 2")
    if not 0 <= n <= N - 1:
        raise ValueError("nesting index out of range")
    idx = fourier_indices(N)

    def fit(data: Dataset) -> FittedModel:
        c = fourier_transform(data)
        sel = greedy_selection(c, n)
        kept = np.zeros(N)
        kept[sel] = c[sel]
        return _fourier_model(kept, sel, tags=tuple(int(i) for i in idx[sel]))

    def model_at(params: ParameterVector) -> FittedModel:
        if params.tags is None or len(params.tags) != params.dimension:
            raise ValueError("greedy parameters need one tag per coordinate")
        kept = np.zeros(N)
        sel = np.array([t % N for t in params.tags], dtype=int)
        kept[sel] = params.coordinates
        return _fourier_model(kept, sel, tags=params.tags)

    def fisher_at(params: ParameterVector, sample_size: int) -> FisherMatrix:
        # Orthonormal coefficients of unit-variance data: unit Fisher.
        return FisherMatrix(np.eye(n + 1))

    return ModelFamily(f"greedy_fourier_n{n}_N{N}", fit,
                       n_params=n + 1, structured_data=True,
                       model_at=model_at, fisher_at=fisher_at)


def greedy_piecewise_complexity(n: int, N: int,
                                generator_coefficients) -> float:
    """Analytic two-regime approximation to the greedy complexity.

    Each nesting step contributes 1 when the step's generator
    coefficient is identifiable and 2 log N when the step selects among
    noise modes. The identifiability boundary (squared magnitude at
    least 2 log N) is the extreme-value scale of N unit chi-squared
    noise coefficients.
    """
    c = np.asarray(generator_coefficients, dtype=float)
    if c.size != N:
        raise ValueError("need the full coefficient vector")
    sel = greedy_selection(c, n)[1:]
    threshold = 2.0 * math.log(N)
    total = 1.0                                   # constant mode, regular
    for p in sel:
        total += 1.0 if c[p] ** 2 >= threshold else threshold
    return total


# ---------------------------------------------------------------------------
# Two-parameter landscape examples
# ---------------------------------------------------------------------------

def _sine_design(N: int) -> np.ndarray:
    return np.arange(N, dtype=float)


def sine_regression_model(amplitude: float, omega: float,
                          N: int) -> FittedModel:
    t = _sine_design(N)
    mean = amplitude * np.sin(omega * t)
    params = ParameterVector([amplitude, omega])

    def log_density(data: Dataset) -> float:
        if data.sample_size != N:
            raise ValueError("data length must equal N")
        return _gaussian_logpdf_sum(data.values - mean)

    def sampler(n: int, rng: np.random.Generator) -> Dataset:
        if n != N:
            raise ValueError("sample size must equal N")
        return Dataset(mean + rng.standard_normal(N))

    return FittedModel(params, log_density, sampler)


def sine_regression_family(N: int, omega_max: float = np.pi,
                           grid_points: int = 0) -> ModelFamily:
    """Singular example: amplitude times a sinusoid of unknown frequency
    in unit noise. At zero amplitude the frequency is unidentifiable and
    the in-sample landscape is rough."""
    if N < 2:
        raise ValueError("N must be >= 2")
    t = _sine_design(N)
    num = grid_points or 8 * N

    def fit(data: Dataset) -> FittedModel:
        omegas = np.linspace(omega_max / num, omega_max, num)
        basis = np.sin(np.outer(omegas, t))           # num x N
        proj = basis @ data.values
        norm2 = (basis ** 2).sum(axis=1)
        gain = proj ** 2 / norm2
        best = int(np.argmax(gain))                   # first max: fixed rule
        a = proj[best] / norm2[best]
        return sine_regression_model(float(a), float(omegas[best]), N)

    def model_at(params: ParameterVector) -> FittedModel:
        a, omega = params.coordinates
        return sine_regression_model(float(a), float(omega), N)

    def fisher_at(params: ParameterVector, sample_size: int) -> FisherMatrix:
        a, omega = params.coordinates
        s = np.sin(omega * t)
        c = a * t * np.cos(omega * t)
        g = np.stack([s, c])
        return FisherMatrix(g @ g.T)

    return ModelFamily(f"sine_regression_N{N}", fit, n_params=2,
                       structured_data=True, model_at=model_at,
                       fisher_at=fisher_at)


def linear_trend_family(N: int) -> ModelFamily:
    """Regular 2-parameter reference: intercept plus slope on a unit
    time grid, known unit noise variance."""
    if N < 3:
        raise ValueError("N must be >= 3")
    t = np.linspace(0.0, 1.0, N)
    design = np.column_stack([np.ones(N), t])

    def make(params: ParameterVector) -> FittedModel:
        mean = design @ params.coordinates

        def log_density(data: Dataset) -> float:
            if data.sample_size != N:
                raise ValueError("data length must equal N")
            return _gaussian_logpdf_sum(data.values - mean)

        def sampler(n: int, rng: np.random.Generator) -> Dataset:
            if n != N:
                raise ValueError("sample size must equal N")
            return Dataset(mean + rng.standard_normal(N))

        return FittedModel(params, log_density, sampler)

    def fit(data: Dataset) -> FittedModel:
        beta, *_ = np.linalg.lstsq(design, data.values, rcond=None)
        return make(ParameterVector(beta))

    def fisher_at(params: ParameterVector, sample_size: int) -> FisherMatrix:
        return FisherMatrix(design.T @ design)

    return ModelFamily(f"linear_trend_N{N}", fit, n_params=2,
                       structured_data=True, model_at=make,
                       fisher_at=fisher_at)
