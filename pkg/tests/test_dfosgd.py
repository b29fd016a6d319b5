import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracjacobi.dfosgd import (
    DfosgdConfig,
    build_design,
    estimate_series_dfosgd,
    fit,
    sample_indices,
)
from fracjacobi.errors import NumericalError
from fracjacobi.rl_oracle import rl_monomial, rl_polynomial
from fracjacobi.signals import SampledSignal, sample


class TestConfig:
    def test_defaults(self):
        c = DfosgdConfig()
        assert (c.N, c.theta, c.order.alpha) == (14, 5, 0.5)

    @pytest.mark.parametrize("N,theta", [(-1, 5), (3, 0)])
    def test_rejects(self, N, theta):
        with pytest.raises(ValueError):
            DfosgdConfig(N, theta)


class TestDesign:
    def test_theta_one(self):
        np.testing.assert_array_equal(build_design(2, 1, 1), [[1, 1], [1, 2], [1, 3]])

    def test_theta_two(self):
        np.testing.assert_array_equal(build_design(4, 2, 1), [[1, 1], [1, 3], [1, 5]])

    def test_constant_column(self):
        np.testing.assert_array_equal(build_design(10, 3, 0), np.ones((5, 1)))

    def test_indices_end_at_last_sample(self):
        np.testing.assert_array_equal(sample_indices(1000, 5)[-2:], [995, 1000])
        np.testing.assert_array_equal(sample_indices(7, 3), [0, 3, 6, 7])

    def test_too_few_rows(self):
        with pytest.raises(ValueError):
            build_design(4, 2, 3)


def poly_signal(coeffs, M, T_s=0.01):
    # values q(i + 1) for the polynomial q in the integer abscissa
    s = np.arange(M + 1) + 1.0
    return SampledSignal(0.0, T_s, np.polynomial.polynomial.polyval(s, coeffs))


class TestFit:
    def test_constant(self):
        sig = SampledSignal(0.0, 0.1, np.full(101, 2.5))
        c = fit(sig, DfosgdConfig(4, 5, 0)).coeffs
        np.testing.assert_allclose(c, [2.5, 0, 0, 0, 0], atol=1e-8)

    @pytest.mark.parametrize("N", [1, 3, 6])
    def test_recovers_polynomial(self, N):
        rng = np.random.default_rng(N)
        q = rng.uniform(-1, 1, N + 1) / 10.0 ** np.arange(N + 1)
        sig = poly_signal(q, 200)
        np.testing.assert_allclose(fit(sig, DfosgdConfig(N, 3, 0)).coeffs, q, rtol=1e-6)

    def test_published_setting_is_well_posed(self):
        sig = sample(lambda x: np.sin(5 * x), 0, 4, 1000)
        p = fit(sig, DfosgdConfig(14, 5, 0))
        resid = sig.values - p(np.arange(1001) + 1.0)
        assert np.sqrt(np.mean(resid**2)) < 0.05

    def test_rank_deficiency(self):
        # raw abscissae up to 1e5 at degree 14 cannot be resolved without scaling
        sig = SampledSignal(0.0, 1.0, np.zeros(100_001))
        with pytest.raises(NumericalError, match="rank deficient"):
            fit(sig, DfosgdConfig(14, 1000, 0), equilibrate=False)

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            fit(SampledSignal(0.0, 1.0, np.zeros(5)), DfosgdConfig(4, 2, 0))


class TestEstimates:
    def test_alpha_zero_is_fit(self):
        sig = sample(lambda x: np.cos(3 * x), 0, 2, 400)
        cfg = DfosgdConfig(8, 5, 0)
        est = estimate_series_dfosgd(sig, cfg)
        ref = fit(sig, cfg)(np.arange(401) + 1.0)
        np.testing.assert_allclose(est.values, ref, rtol=1e-12, atol=1e-14)
        np.testing.assert_array_equal(est.abscissae, sig.x)

    def test_constant_first_derivative(self):
        sig = SampledSignal(0.0, 0.02, np.full(301, -1.5))
        est = estimate_series_dfosgd(sig, DfosgdConfig(6, 5, 1))
        np.testing.assert_allclose(est.values, 0.0, atol=1e-8)

    def test_constant_half_derivative(self):
        c, T_s = 3.0, 0.02
        sig = SampledSignal(0.0, T_s, np.full(301, c))
        est = estimate_series_dfosgd(sig, DfosgdConfig(0, 5, 0.5))
        x = sig.x
        expected = c * (x + T_s) ** -0.5 / math.gamma(0.5)
        np.testing.assert_allclose(est.values, expected, rtol=1e-12)
        # approaches the continuous RL half-derivative as i grows
        assert est.values[-1] == pytest.approx(c * rl_monomial(0, 0.5, x[-1]), rel=2 * T_s / x[-1])

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    def test_polynomial_data(self, alpha):
        # criterion-8 shape: exact power rule of the fitted polynomial in s, scaled by T_s
        q = [0.4, -0.02, 3e-4, -1e-6]
        T_s = 0.01
        sig = poly_signal(q, 500, T_s)
        est = estimate_series_dfosgd(sig, DfosgdConfig(3, 5, alpha))
        s = np.arange(501) + 1.0
        ref = np.array([rl_polynomial(q, alpha, si) for si in s]) / T_s**alpha
        np.testing.assert_allclose(est.values, ref, rtol=1e-4, atol=1e-8 * np.max(np.abs(ref)))


class TestInvariants:
    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10_000), N=st.integers(0, 10), theta=st.integers(1, 6))
    def test_fit_idempotence(self, seed, N, theta):
        y = np.random.default_rng(seed).normal(size=301)
        sig = SampledSignal(0.0, 0.01, y)
        cfg = DfosgdConfig(N, theta, 0)
        first = fit(sig, cfg)
        smoothed = estimate_series_dfosgd(sig, cfg)
        second = fit(sig.with_values(smoothed.values), cfg)
        np.testing.assert_allclose(second.scaled, first.scaled, rtol=1e-10, atol=1e-10 * np.max(np.abs(first.scaled)))

    @settings(max_examples=25, deadline=None)
    @given(
        seed=st.integers(0, 10_000),
        N=st.integers(0, 4),
        M=st.integers(10, 50),
        theta=st.integers(1, 2),
        alpha=st.sampled_from([0.0, 0.5, 1.0, 1.5]),
    )
    def test_equilibration_invariance(self, seed, N, M, theta, alpha):
        y = np.random.default_rng(seed).normal(size=M + 1)
        sig = SampledSignal(0.0, 0.1, y)
        cfg = DfosgdConfig(N, theta, alpha)
        a = estimate_series_dfosgd(sig, cfg, equilibrate=True).values
        b = estimate_series_dfosgd(sig, cfg, equilibrate=False).values
        np.testing.assert_allclose(a, b, rtol=1e-6, atol=1e-6 * np.max(np.abs(a)))
