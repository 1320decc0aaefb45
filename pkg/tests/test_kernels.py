import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frares import (
    ConvergenceError,
    PoissonWeight,
    conv,
    kernel_seq,
    mittag_leffler,
    poisson_weight,
)

mpmath.mp.dps = 30


def kernel_loggamma_oracle(alpha: float, tau: float, n: int) -> np.ndarray:
    """Direct log-Gamma evaluation of the kernel, independent of the recurrence."""
    la = mpmath.loggamma(alpha)
    t = mpmath.mp.mpf(tau)
    return np.array(
        [
            float(t ** (alpha - 1) * mpmath.exp(mpmath.loggamma(alpha + i) - la - mpmath.loggamma(i + 1)))
            for i in range(n + 1)
        ]
    )


class TestKernelSeq:
    def test_order_one_is_all_ones(self):
        seq = kernel_seq(1.0, 0.5, 4)
        np.testing.assert_array_equal(seq.values, np.ones(5))

    def test_single_value_reduces_to_tau_power(self):
        seq = kernel_seq(1.5, 0.25, 0)
        assert seq.values[0] == pytest.approx(0.25**0.5, rel=1e-15)

    def test_order_two_against_loggamma_oracle(self):
        seq = kernel_seq(2.0, 1.0, 3)
        oracle = kernel_loggamma_oracle(2.0, 1.0, 3)
        np.testing.assert_allclose(seq.values, oracle, rtol=1e-14)
        np.testing.assert_allclose(seq.values, [1.0, 2.0, 3.0, 4.0], rtol=1e-15)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 1.5, 2.7])
    @pytest.mark.parametrize("tau", [0.05, 0.5])
    def test_recurrence_matches_loggamma_to_1e12_at_n512(self, alpha, tau):
        seq = kernel_seq(alpha, tau, 512)
        oracle = kernel_loggamma_oracle(alpha, tau, 512)
        assert np.max(np.abs(seq.values - oracle) / oracle) <= 1e-12

    def test_values_positive_and_recurrence_invariant(self):
        seq = kernel_seq(0.7, 0.3, 64)
        assert np.all(seq.values > 0)
        ratios = seq.values[1:] / seq.values[:-1]
        expected = (0.7 + np.arange(64)) / (np.arange(64) + 1.0)
        np.testing.assert_allclose(ratios, expected, rtol=1e-15)

    @pytest.mark.parametrize(
        "alpha,tau,n", [(0.0, 0.1, 3), (-1.0, 0.1, 3), (1.0, 0.0, 3), (1.0, -0.5, 3), (1.0, 0.1, -1)]
    )
    def test_domain_errors(self, alpha, tau, n):
        with pytest.raises(ValueError):
            kernel_seq(alpha, tau, n)

    def test_values_are_read_only(self):
        seq = kernel_seq(1.0, 1.0, 3)
        with pytest.raises(ValueError):
            seq.values[0] = 2.0


class TestSemigroupLaw:
    @pytest.mark.parametrize("alpha", [0.3, 0.5, 1.0, 1.5])
    @pytest.mark.parametrize("beta", [0.3, 0.5, 1.0, 1.5])
    @pytest.mark.parametrize("tau", [0.05, 0.1, 0.5])
    def test_on_spec_grid(self, alpha, beta, tau):
        n = 64
        ka = kernel_seq(alpha, tau, n).values
        kb = kernel_seq(beta, tau, n).values
        kab = kernel_seq(alpha + beta, tau, n).values
        lhs = tau * conv(ka, kb)
        assert np.all(np.abs(lhs - kab) <= 1e-10 * (1.0 + np.abs(kab)))

    @settings(max_examples=40, deadline=None)
    @given(
        alpha=st.floats(min_value=0.05, max_value=3.0),
        beta=st.floats(min_value=0.05, max_value=3.0),
        tau=st.floats(min_value=0.01, max_value=1.0),
    )
    def test_property(self, alpha, beta, tau):
        n = 32
        lhs = tau * conv(kernel_seq(alpha, tau, n).values, kernel_seq(beta, tau, n).values)
        kab = kernel_seq(alpha + beta, tau, n).values
        assert np.all(np.abs(lhs - kab) <= 1e-10 * (1.0 + np.abs(kab)))


class TestConv:
    def test_identity_kernel(self):
        out = conv([1.0, 0.0, 0.0], [2.0, -3.0, 5.0])
        np.testing.assert_array_equal(out, [2.0, -3.0, 5.0])

    def test_hand_expansion(self):
        np.testing.assert_array_equal(conv([1.0, 1.0], [1.0, 1.0]), [1.0, 2.0])

    def test_half_kernels_compose_to_ones(self):
        k = kernel_seq(0.5, 0.2, 40).values
        np.testing.assert_allclose(0.2 * conv(k, k), np.ones(41), rtol=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            conv([1.0, 2.0], [1.0, 2.0, 3.0])

    @settings(max_examples=25, deadline=None)
    @given(
        st.lists(st.floats(min_value=-10, max_value=10), min_size=1, max_size=12),
        st.lists(st.floats(min_value=-10, max_value=10), min_size=1, max_size=12),
    )
    def test_commutative(self, a, b):
        size = min(len(a), len(b))
        a, b = a[:size], b[:size]
        np.testing.assert_allclose(conv(a, b), conv(b, a), atol=1e-9)


class TestPoissonWeight:
    def test_at_origin(self):
        assert poisson_weight(0, 1.0, 0.0) == 1.0
        assert poisson_weight(1, 1.0, 0.0) == 0.0

    def test_matches_direct_formula(self):
        t = np.linspace(0.0, 4.0, 17)
        w = poisson_weight(3, 0.5, t)
        direct = np.exp(-t / 0.5) * (t / 0.5) ** 3 / (0.5 * math.factorial(3))
        np.testing.assert_allclose(w, direct, rtol=1e-13)

    def test_nonnegative_for_large_n(self):
        t = np.linspace(0.0, 100.0, 50)
        assert np.all(poisson_weight(200, 0.3, t) >= 0.0)

    def test_unit_mass_spec_example(self):
        assert PoissonWeight(3, 0.5).mass() == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("n,tau", [(0, 1.0), (7, 0.1), (40, 0.5)])
    def test_unit_mass(self, n, tau):
        assert PoissonWeight(n, tau).mass() == pytest.approx(1.0, abs=1e-8)

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            poisson_weight(2, 1.0, -0.1)

    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            poisson_weight(-1, 1.0, 0.0)
        with pytest.raises(ValueError):
            poisson_weight(1, 0.0, 0.0)


class TestMittagLeffler:
    def test_exponential_case(self):
        out = mittag_leffler(1.0, 1.0, -1.0)
        assert out.value == pytest.approx(math.exp(-1.0), rel=1e-14)
        assert abs(out.value - math.exp(-1.0)) <= 10 * out.error + 1e-15

    def test_cosine_case(self):
        out = mittag_leffler(2.0, 1.0, -1.0)
        assert out.value == pytest.approx(math.cos(1.0), rel=1e-14)

    @pytest.mark.parametrize("alpha,beta", [(0.7, 1.3), (1.1, 0.1), (2.0, 2.0)])
    def test_at_zero(self, alpha, beta):
        out = mittag_leffler(alpha, beta, 0.0)
        assert out.value == pytest.approx(1.0 / math.gamma(beta), rel=1e-15)
        assert out.error == 0.0

    @settings(max_examples=40, deadline=None)
    @given(z=st.floats(min_value=-5.0, max_value=5.0))
    def test_exponential_series_property(self, z):
        out = mittag_leffler(1.0, 1.0, z)
        assert out.value == pytest.approx(math.exp(z), rel=1e-12)

    def test_error_estimate_bounds_truncation(self):
        out = mittag_leffler(0.8, 0.5, -0.9)
        oracle = float(mpmath.mp.mpf(1) * mpmath.re(_mp_ml(0.8, 0.5, -0.9)))
        assert abs(out.value - oracle) <= 10 * out.error + 1e-14

    def test_rejects_large_argument(self):
        with pytest.raises(ValueError):
            mittag_leffler(0.5, 1.0, 51.0)

    def test_reports_nonconvergence(self):
        with pytest.raises(ConvergenceError):
            mittag_leffler(0.1, 1.0, -50.0)

    def test_bad_orders(self):
        with pytest.raises(ValueError):
            mittag_leffler(0.0, 1.0, 0.5)
        with pytest.raises(ValueError):
            mittag_leffler(1.0, -1.0, 0.5)


def _mp_ml(alpha, beta, z, terms=200):
    acc = mpmath.mp.mpf(0)
    for k in range(terms):
        acc += mpmath.mp.mpf(z) ** k / mpmath.gamma(alpha * k + beta)
    return acc
