"""Information primitives: Shannon information, cross entropy, KL
statistic and divergence, and the error statistic."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fickit.core import (Dataset, DensityError, FittedModel,
                         MonteCarloEstimate, ParameterVector, cross_entropy_mc,
                         error_statistic, kl_divergence_mc, kl_statistic,
                         replicate_rng, shannon_information)
from fickit.criteria import true_complexity_mc
from fickit.models import exponential_model, gaussian_mean_family, \
    gaussian_mean_model

HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
STD_NORMAL_ENTROPY = HALF_LOG_2PI + 0.5


class TestDataset:
    def test_sample_size(self):
        assert Dataset([1.0, 2.0, 3.0]).sample_size == 3

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Dataset([])

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Dataset([1.0, np.inf])
        with pytest.raises(ValueError):
            Dataset([np.nan])

    def test_rejects_2d(self):
        with pytest.raises(ValueError):
            Dataset(np.ones((2, 2)))

    def test_immutable(self):
        d = Dataset([1.0, 2.0])
        with pytest.raises(ValueError):
            d.values[0] = 5.0


class TestParameterVector:
    def test_dimension_counts_continuous_only(self):
        p = ParameterVector([1.0, 2.0], tags=(3, -5))
        assert p.dimension == 2

    def test_rejects_duplicate_tags(self):
        with pytest.raises(ValueError):
            ParameterVector([1.0, 2.0], tags=(3, 3))


class TestMonteCarloEstimate:
    def test_std_error_definition(self):
        vals = np.array([1.0, 2.0, 3.0, 4.0])
        est = MonteCarloEstimate.from_values(vals, seed=7)
        assert est.value == pytest.approx(2.5)
        assert est.std_error == pytest.approx(vals.std(ddof=1) / 2.0)
        assert est.replicates == 4
        assert est.seed == 7

    def test_rejects_negative_std_error(self):
        with pytest.raises(ValueError):
            MonteCarloEstimate(1.0, -0.1, 10, 0)


class TestShannonInformation:
    def test_standard_normal_at_mode(self):
        model = gaussian_mean_model([0.0])
        assert shannon_information(Dataset([0.0]), model) == \
            pytest.approx(HALF_LOG_2PI, abs=1e-12)

    def test_additive_over_observations(self):
        model = gaussian_mean_model([0.0])
        xs = [0.3, -1.2, 0.7, 2.1]
        total = shannon_information(Dataset(xs), model)
        parts = sum(shannon_information(Dataset([x]), model) for x in xs)
        assert total == pytest.approx(parts, abs=1e-9)

    def test_exponential_rate_one(self):
        # -log(1 * e^{-2}) = 2
        model = exponential_model(1.0)
        assert shannon_information(Dataset([2.0]), model) == \
            pytest.approx(2.0, abs=1e-12)

    def test_non_finite_density_raises(self):
        model = exponential_model(1.0)
        with pytest.raises(DensityError):
            shannon_information(Dataset([-1.0]), model)

    def test_relabeled_model_same_information(self):
        # Same density, different parameter bookkeeping: h is unchanged.
        base = gaussian_mean_model([0.5])
        relabeled = FittedModel(ParameterVector([1.0]), base.log_density,
                                base.sampler)
        data = Dataset([0.1, 0.9, -0.4, 1.3])
        assert shannon_information(data, base) == \
            shannon_information(data, relabeled)


class TestCrossEntropy:
    def test_standard_normal_entropy(self):
        truth = gaussian_mean_model([0.0])
        est = cross_entropy_mc(truth, truth, 1, 4000, seed=1)
        assert abs(est.value - STD_NORMAL_ENTROPY) <= 3 * est.std_error

    def test_shifted_mean_adds_half(self):
        truth = gaussian_mean_model([0.0])
        other = gaussian_mean_model([1.0])
        est = cross_entropy_mc(truth, other, 1, 4000, seed=2)
        assert abs(est.value - (STD_NORMAL_ENTROPY + 0.5)) <= \
            3 * est.std_error

    def test_minimized_at_truth(self):
        truth = gaussian_mean_model([0.0])
        at_truth = cross_entropy_mc(truth, truth, 4, 800, seed=3)
        for mu in (-1.0, -0.5, 0.5, 1.0):
            other = cross_entropy_mc(truth, gaussian_mean_model([mu]),
                                     4, 800, seed=3)
            combined = math.hypot(at_truth.std_error, other.std_error)
            assert at_truth.value <= other.value + 3 * combined

    def test_replicates_precondition(self):
        truth = gaussian_mean_model([0.0])
        with pytest.raises(ValueError):
            cross_entropy_mc(truth, truth, 1, 1, seed=0)

    def test_deterministic_replay(self):
        truth = gaussian_mean_model([0.0])
        a = cross_entropy_mc(truth, truth, 3, 50, seed=11)
        b = cross_entropy_mc(truth, truth, 3, 50, seed=11)
        assert a == b


class TestKLStatistic:
    def test_identical_parameters(self):
        m = gaussian_mean_model([0.3])
        assert kl_statistic(Dataset([1.0, 2.0]), m, m) == 0.0

    def test_hand_value(self):
        # d = 0.5 * ((0 - 1)^2 - 0^2)
        zero = gaussian_mean_model([0.0])
        one = gaussian_mean_model([1.0])
        assert kl_statistic(Dataset([0.0]), zero, one) == \
            pytest.approx(0.5, abs=1e-12)

    @given(st.lists(st.floats(-10, 10), min_size=1, max_size=8),
           st.floats(-3, 3), st.floats(-3, 3))
    @settings(max_examples=60, deadline=None)
    def test_antisymmetry(self, xs, mu0, mu1):
        a = gaussian_mean_model([mu0])
        b = gaussian_mean_model([mu1])
        data = Dataset(xs)
        assert kl_statistic(data, a, b) + kl_statistic(data, b, a) == 0.0


class TestKLDivergence:
    def test_identical_parameters(self):
        m = gaussian_mean_model([0.0])
        est = kl_divergence_mc(m, m, m, 5, 100, seed=4)
        assert est.value == 0.0

    def test_gaussian_shift(self):
        # KL(N(0,1) || N(1,1)) = 1/2 per observation.
        zero = gaussian_mean_model([0.0])
        one = gaussian_mean_model([1.0])
        for n in (1, 8):
            est = kl_divergence_mc(zero, one, zero, n, 3000, seed=5)
            assert abs(est.value - n / 2.0) <= 3 * est.std_error

    def test_gibbs_nonnegative(self):
        zero = gaussian_mean_model([0.0])
        for mu in (0.25, -0.8, 1.5):
            other = gaussian_mean_model([mu])
            est = kl_divergence_mc(zero, other, zero, 4, 2000, seed=6)
            assert est.value >= -3 * est.std_error


class TestErrorStatistic:
    def test_identical_parameters(self):
        m = gaussian_mean_model([0.0])
        assert error_statistic(Dataset([1.0, -1.0]), m, m, 0.0) == 0.0

    def test_mean_kappa_is_unity(self):
        # One regular location parameter: expected error statistic 1.
        truth = gaussian_mean_model([0.0])
        family = gaussian_mean_family(1)
        n, reps = 10, 300
        kappas = np.empty(reps)
        for r in range(reps):
            x = truth.sampler(n, replicate_rng(21, r))
            fitted = family.fit(x)
            div = kl_divergence_mc(truth, fitted, truth, n, 150,
                                   seed=1000 + r).value
            kappas[r] = error_statistic(x, truth, fitted, div)
        est = MonteCarloEstimate.from_values(kappas, seed=21)
        assert abs(est.value - 1.0) <= 3 * est.std_error

    def test_matches_complexity_oracle(self):
        # Same quantity through the direct generalization-gap estimator.
        truth = gaussian_mean_model([0.0])
        family = gaussian_mean_family(1)
        direct = true_complexity_mc(truth, family, 10, replicates=3000,
                                    seed=22)
        assert abs(direct.value - 1.0) <= 3 * direct.std_error
