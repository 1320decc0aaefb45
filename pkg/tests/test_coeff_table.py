import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frares import coeff_table, kernel_seq


class TestIdentityCase:
    def test_alpha_beta_one_is_identity(self):
        # k(1, n) = 1 exactly under the ratio recurrence, so the recursions
        # telescope to exact zeros off the superdiagonal.
        table = coeff_table(1.0, 1.0, 0.37, 50).table
        diag = table[np.arange(51), np.arange(51)]
        off = table.copy()
        off[np.arange(51), np.arange(51)] = 0.0
        np.testing.assert_array_equal(diag, np.ones(51))
        assert np.max(np.abs(off)) < 1e-12
        assert np.max(np.abs(off)) == 0.0

    @pytest.mark.parametrize("tau", [0.05, 0.25, 1.0, 3.0])
    def test_identity_for_any_step(self, tau):
        table = coeff_table(1.0, 1.0, tau, 12).table
        np.testing.assert_array_equal(table, np.eye(13))


class TestFirstEntries:
    def test_corner_is_tau_power(self):
        assert coeff_table(1.5, 1.0, 0.3, 0).entry(0, 1) == 1.0
        assert coeff_table(1.0, 0.5, 0.25, 2).entry(0, 1) == pytest.approx(2.0, rel=1e-15)

    def test_row_one_uses_proof_coefficients(self):
        # a(1, 1) = (kb(1) ka(0) - kb(0) ka(1)) / ka(0) = tau**(beta-1) (beta - alpha)
        # a(1, 2) = kb(0) ka(1) / ka(0)               = tau**(beta-1) alpha
        alpha, beta, tau = 1.5, 1.0, 0.1
        t = coeff_table(alpha, beta, tau, 1)
        assert t.entry(1, 1) == pytest.approx(tau ** (beta - 1) * (beta - alpha), rel=1e-15)
        assert t.entry(1, 2) == pytest.approx(tau ** (beta - 1) * alpha, rel=1e-15)

    def test_proof_value_confirmed_by_resolvent_equation_oracle(self):
        # Solve the defining equation directly for S^1 with a scalar generator
        # and check which first-row coefficients reproduce it.  The recursion
        # definition block and the representation proof disagree on a(1, 1);
        # only the proof's value survives this oracle.
        alpha, beta, tau, lam = 1.3, 0.6, 0.2, -0.8
        ka = kernel_seq(alpha, tau, 1).values
        kb = kernel_seq(beta, tau, 1).values
        shift = tau**-alpha
        r = shift / (shift - lam)
        s0 = kb[0] * r
        # S^1 = kb(1) + tau lam (ka(1) S^0 + ka(0) S^1)
        s1 = (kb[1] + tau * lam * ka[1] * s0) / (1.0 - tau * lam * ka[0])
        t = coeff_table(alpha, beta, tau, 1)
        from_table = t.entry(1, 1) * r + t.entry(1, 2) * r**2
        assert from_table == pytest.approx(s1, rel=1e-13)
        definition_block_a11 = (kb[1] * ka[1] - kb[0] * ka[1]) / ka[0]
        from_definition_block = definition_block_a11 * r + t.entry(1, 2) * r**2
        assert abs(from_definition_block - s1) > 1e-3 * abs(s1)


class TestStructure:
    def test_strictly_lower_triangle_padding_is_zero(self):
        t = coeff_table(1.3, 0.7, 0.2, 10).table
        for n in range(11):
            np.testing.assert_array_equal(t[n, n + 1 :], np.zeros(10 - n))

    def test_superdiagonal_closed_form(self):
        # a(n, n+1) = alpha * a(n-1, n) telescopes to alpha**n tau**(beta-1).
        alpha, beta, tau = 1.5, 0.4, 0.1
        t = coeff_table(alpha, beta, tau, 40)
        n = np.arange(41)
        expected = alpha**n.astype(float) * tau ** (beta - 1.0)
        got = t.table[n, n]
        np.testing.assert_allclose(got, expected, rtol=1e-13)


class TestRowSums:
    def test_plain_relative_at_moderate_size(self):
        # With the zero generator the representation forces row sums to equal
        # the beta kernel; at n <= 20 the entries are small enough that the
        # plain relative comparison is meaningful.
        alpha, beta, tau = 1.5, 1.0, 0.1
        t = coeff_table(alpha, beta, tau, 20)
        kb = kernel_seq(beta, tau, 20).values
        np.testing.assert_allclose(t.row_sums(), kb, rtol=1e-10)

    @pytest.mark.parametrize("alpha,beta", [(1.3, 1.0), (1.5, 1.0), (1.1, 0.1), (0.1, 0.9)])
    def test_scale_aware_at_n200(self, alpha, beta):
        # For alpha > 1 the superdiagonal alone reaches alpha**200 (about
        # 2e45 at alpha = 1.5) while the row sum stays at k(beta, n), so no
        # fixed-precision table can satisfy the identity relative to k; the
        # meaningful relative gate normalizes by the row's magnitude.
        t = coeff_table(alpha, beta, 0.1, 200)
        kb = kernel_seq(beta, 0.1, 200).values
        scale = np.maximum(np.abs(kb), t.row_abs_sums())
        assert np.max(np.abs(t.row_sums() - kb) / scale) <= 1e-10

    @settings(max_examples=20, deadline=None)
    @given(
        alpha=st.floats(min_value=0.1, max_value=2.0),
        beta=st.floats(min_value=0.1, max_value=2.0),
        tau=st.floats(min_value=0.05, max_value=0.5),
    )
    def test_scale_aware_property(self, alpha, beta, tau):
        t = coeff_table(alpha, beta, tau, 40)
        kb = kernel_seq(beta, tau, 40).values
        scale = np.maximum(np.abs(kb), t.row_abs_sums())
        assert np.max(np.abs(t.row_sums() - kb) / scale) <= 1e-12


class TestValidation:
    @pytest.mark.parametrize("alpha,beta,tau,n", [(0, 1, 0.1, 3), (1, -1, 0.1, 3), (1, 1, 0, 3), (1, 1, 0.1, -1)])
    def test_domain_errors(self, alpha, beta, tau, n):
        with pytest.raises(ValueError):
            coeff_table(alpha, beta, tau, n)

    def test_entry_bounds(self):
        t = coeff_table(1.0, 1.0, 0.1, 3)
        with pytest.raises(IndexError):
            t.entry(1, 3)
        with pytest.raises(IndexError):
            t.entry(2, 0)
