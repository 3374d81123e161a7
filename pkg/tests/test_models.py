"""Model families: MLE fits, samplers, the orthonormal Fourier basis,
and the sequential/greedy mode-selection algorithms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fickit.core import (Dataset, FitError, ParameterVector, replicate_rng,
                         shannon_information)
from fickit.models import (exponential_family, fourier_indices,
                           fourier_transform, gaussian_mean_family,
                           greedy_fourier_family, greedy_piecewise_complexity,
                           greedy_selection, inverse_fourier_transform,
                           linear_regression_family, linear_trend_family,
                           neutrino_mean, neutrino_truth,
                           sequential_fourier_family, sine_regression_family)


class TestGaussianMeanFamily:
    def test_single_mean_fit(self):
        fit = gaussian_mean_family(1).fit(Dataset([1.0, 2.0, 3.0]))
        assert fit.params.coordinates[0] == pytest.approx(2.0)

    def test_block_means(self):
        fit = gaussian_mean_family(2).fit(Dataset([1.0, 3.0, 10.0, 20.0]))
        assert fit.params.coordinates == pytest.approx([2.0, 15.0])

    def test_uneven_blocks(self):
        # Leading block absorbs the remainder: blocks {1,3} and {10}.
        fit = gaussian_mean_family(2).fit(Dataset([1.0, 3.0, 10.0]))
        assert fit.params.coordinates == pytest.approx([2.0, 10.0])

    def test_too_short_for_blocks(self):
        with pytest.raises(ValueError):
            gaussian_mean_family(4).fit(Dataset([1.0, 2.0, 3.0]))

    def test_refit_recovers_means(self):
        family = gaussian_mean_family(2)
        gen = family.model_at(ParameterVector([1.5, -0.5]))
        refit = family.fit(gen.sampler(100_000, replicate_rng(31, 0)))
        assert np.abs(refit.params.coordinates
                      - [1.5, -0.5]).max() < 0.02


class TestLinearRegressionFamily:
    def test_intercept_only_hand_fit(self):
        family = linear_regression_family(np.ones((4, 1)))
        fit = family.fit(Dataset([0.0, 2.0, 0.0, 2.0]))
        assert fit.params.coordinates[0] == pytest.approx(1.0)
        assert fit.params.coordinates[1] == pytest.approx(1.0)  # MLE variance

    def test_rank_deficient_design(self):
        design = np.column_stack([np.ones(10), np.ones(10)])
        with pytest.raises(ValueError):
            linear_regression_family(design)

    def test_too_few_observations(self):
        with pytest.raises(ValueError):
            linear_regression_family(np.ones((3, 2)))

    def test_zero_residual_is_fit_error(self):
        family = linear_regression_family(np.ones((5, 1)))
        with pytest.raises(FitError):
            family.fit(Dataset([2.0] * 5))


class TestExponentialFamily:
    def test_single_observation(self):
        fit = exponential_family().fit(Dataset([1.0]))
        assert fit.params.coordinates[0] == pytest.approx(1.0)

    def test_rate_is_n_over_sum(self):
        fit = exponential_family().fit(Dataset([2.0, 2.0]))
        assert fit.params.coordinates[0] == pytest.approx(0.5)

    def test_nonpositive_data_rejected(self):
        with pytest.raises(FitError):
            exponential_family().fit(Dataset([1.0, 0.0]))


class TestNeutrinoTruth:
    def test_mean_at_sine_maximum(self):
        # 2*pi*j/N + pi/6 = pi/2 at j = N/6; radicand is 220 there.
        mu = neutrino_mean(12)
        assert mu[2 - 1] == pytest.approx(math.sqrt(220.0), abs=1e-9)

    def test_mean_bounds(self):
        mu = neutrino_mean(100)
        assert np.all(mu ** 2 >= 20.0 - 1e-9)
        assert np.all(mu ** 2 <= 220.0 + 1e-9)

    def test_odd_n_rejected(self):
        with pytest.raises(ValueError):
            neutrino_truth(99)

    def test_sampler_size_and_determinism(self):
        truth = neutrino_truth(100)
        a = truth.sampler(100, replicate_rng(5, 0))
        b = truth.sampler(100, replicate_rng(5, 0))
        assert a.sample_size == 100
        assert np.array_equal(a.values, b.values)


class TestFourierBasis:
    def test_constant_signal(self):
        c = fourier_transform(np.full(16, 3.0))
        assert c[0] == pytest.approx(3.0 * 4.0, abs=1e-9)
        assert np.abs(c[1:]).max() < 1e-9

    def test_odd_length_rejected(self):
        with pytest.raises(ValueError):
            fourier_transform(np.ones(7))

    @given(arrays(float, st.sampled_from([2, 4, 10, 16]),
                  elements=st.floats(-100, 100)))
    @settings(max_examples=80, deadline=None)
    def test_roundtrip_and_parseval(self, x):
        c = fourier_transform(x)
        back = inverse_fourier_transform(c)
        scale = max(1.0, np.abs(x).max())
        assert np.abs(back - x).max() < 1e-9 * scale
        assert abs((c ** 2).sum() - (x ** 2).sum()) <= \
            1e-9 * max(1.0, (x ** 2).sum())

    def test_index_layout(self):
        assert list(fourier_indices(8)) == [0, 1, 2, 3, 4, -3, -2, -1]

    def test_white_noise_coefficients_unit_covariance(self):
        n, reps = 16, 4000
        rng = np.random.default_rng([77])
        coeffs = np.array([fourier_transform(rng.standard_normal(n))
                           for _ in range(reps)])
        cov = np.cov(coeffs.T, bias=False)
        tol = 3.0 / math.sqrt(reps)
        assert np.abs(cov - np.eye(n)).max() < tol + 0.03
        assert np.abs(coeffs.mean(axis=0)).max() < tol


class TestSequentialFamily:
    def test_parameter_count(self):
        for n in (0, 1, 3):
            family = sequential_fourier_family(n, 100)
            assert family.n_params == 2 * n + 1
            fit = family.fit(neutrino_truth(100).sampler(
                100, replicate_rng(1, 0)))
            assert fit.params.dimension == 2 * n + 1

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            sequential_fourier_family(50, 100)
        with pytest.raises(ValueError):
            sequential_fourier_family(-1, 100)

    def test_keeps_low_modes_only(self):
        data = neutrino_truth(20).sampler(20, replicate_rng(2, 0))
        fit = sequential_fourier_family(1, 20).fit(data)
        c = fourier_transform(data)
        # Fitted mean reproduces modes 0, +1, -1 and zeroes the rest.
        kept = np.zeros(20)
        kept[[0, 1, -1]] = c[[0, 1, -1]]
        assert np.allclose(fit.params.coordinates, c[[0, 1, 19]])
        assert np.allclose(
            inverse_fourier_transform(kept),
            fit.sampler(20, replicate_rng(3, 0)).values
            - replicate_rng(3, 0).standard_normal(20))

    def test_refit_averages_to_generator(self):
        family = sequential_fourier_family(1, 20)
        gen = family.model_at(ParameterVector([2.0, -1.0, 0.5]))
        refits = np.array([
            family.fit(gen.sampler(20, replicate_rng(8, r))).params.coordinates
            for r in range(400)])
        err = np.abs(refits.mean(axis=0) - [2.0, -1.0, 0.5])
        assert err.max() < 3.0 / math.sqrt(400)


class TestGreedySelection:
    def test_argmax_selection(self):
        c = np.zeros(16)
        c[5] = 9.0
        sel = greedy_selection(c, 1)
        assert list(sel) == [0, 5]

    def test_always_includes_constant_mode(self):
        c = np.zeros(16)
        c[0] = 100.0
        c[3] = 1.0
        assert list(greedy_selection(c, 1)) == [0, 3]

    def test_tie_breaks_small_index_positive_first(self):
        c = np.zeros(8)
        c[[2, 3, -2, -3]] = 2.0
        # |i|=2 before |i|=3, positive before negative.
        assert list(greedy_selection(c, 4)) == [0, 2, 8 - 2, 3, 8 - 3]

    def test_pure_function_of_coefficients(self):
        rng = np.random.default_rng([9])
        c = rng.standard_normal(32)
        a = greedy_selection(c, 5)
        b = greedy_selection(c.copy(), 5)
        assert np.array_equal(a, b)


class TestGreedyFamily:
    def test_parameter_count_and_tags(self):
        family = greedy_fourier_family(3, 100)
        assert family.n_params == 4
        data = neutrino_truth(100).sampler(100, replicate_rng(4, 0))
        fit = family.fit(data)
        assert fit.params.dimension == 4
        assert len(fit.params.tags) == 4
        assert fit.params.tags[0] == 0
        assert len(set(fit.params.tags)) == 4

    def test_model_at_roundtrip(self):
        family = greedy_fourier_family(2, 16)
        data = Dataset(np.random.default_rng([12]).standard_normal(16))
        fit = family.fit(data)
        rebuilt = family.model_at(fit.params)
        assert shannon_information(data, rebuilt) == \
            pytest.approx(shannon_information(data, fit), abs=1e-9)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            greedy_fourier_family(16, 16)


class TestNestingProperties:
    @given(st.integers(0, 4), st.integers(0, 9))
    @settings(max_examples=40, deadline=None)
    def test_monotone_fit_both_algorithms(self, n, draw):
        N = 20
        data = neutrino_truth(N).sampler(N, replicate_rng(100, draw))
        for build in (sequential_fourier_family, greedy_fourier_family):
            h_prev = None
            for level in (n, n + 1):
                fit = build(level, N).fit(data)
                h = shannon_information(data, fit)
                if h_prev is not None:
                    assert h <= h_prev + 1e-9
                h_prev = h

    @given(st.integers(0, 4), st.integers(0, 9))
    @settings(max_examples=40, deadline=None)
    def test_greedy_dominates_at_equal_parameter_count(self, n, draw):
        # Greedy keeps the 2n largest coefficients; sequential keeps a
        # fixed set of 2n. Same count, greedy fits at least as well.
        N = 20
        data = neutrino_truth(N).sampler(N, replicate_rng(101, draw))
        h_seq = shannon_information(
            data, sequential_fourier_family(n, N).fit(data))
        h_greedy = shannon_information(
            data, greedy_fourier_family(2 * n, N).fit(data))
        assert h_greedy <= h_seq + 1e-9


class TestGreedyPiecewise:
    def test_all_identifiable(self):
        N = 100
        c = np.zeros(N)
        c[[0, 1, 2]] = 10.0
        assert greedy_piecewise_complexity(2, N, c) == pytest.approx(3.0)

    def test_all_noise(self):
        N = 100
        c = np.zeros(N)
        c[0] = 10.0
        expected = 1.0 + 2 * 2.0 * math.log(N)
        assert greedy_piecewise_complexity(2, N, c) == pytest.approx(expected)

    def test_threshold_boundary(self):
        N = 100
        c = np.zeros(N)
        c[0] = 10.0
        c[1] = math.sqrt(2.0 * math.log(N))   # exactly identifiable
        assert greedy_piecewise_complexity(1, N, c) == pytest.approx(2.0)


class TestLandscapeFamilies:
    def test_sine_fit_recovers_strong_signal(self):
        N = 60
        family = sine_regression_family(N)
        gen = family.model_at(ParameterVector([3.0, 0.7]))
        fit = family.fit(gen.sampler(N, replicate_rng(41, 0)))
        a, omega = fit.params.coordinates
        assert a == pytest.approx(3.0, abs=0.5)
        assert omega == pytest.approx(0.7, abs=0.05)

    def test_linear_trend_fit(self):
        N = 50
        family = linear_trend_family(N)
        gen = family.model_at(ParameterVector([1.0, -2.0]))
        fit = family.fit(gen.sampler(N, replicate_rng(42, 0)))
        assert np.abs(fit.params.coordinates - [1.0, -2.0]).max() < 1.0

    def test_structured_flags(self):
        assert sequential_fourier_family(1, 20).structured_data
        assert greedy_fourier_family(1, 20).structured_data
        assert not gaussian_mean_family(1).structured_data
        assert not exponential_family().structured_data
