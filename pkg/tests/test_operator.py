import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frares import (
    ResolventSetError,
    dense_op,
    diag_op,
    laplacian_1d,
    op_from_descriptor,
    op_from_matrix_file,
    resolvent_apply,
    resolvent_handle,
    scalar_op,
)


class TestLinOp:
    def test_apply_variants_agree(self):
        lam = -0.7
        x = np.array([1.0, -2.0, 0.5])
        ops = [scalar_op(lam, dim=3), diag_op([lam] * 3), dense_op(lam * np.eye(3))]
        for op in ops:
            np.testing.assert_allclose(op.apply(x), lam * x, rtol=1e-15)

    @settings(max_examples=25, deadline=None)
    @given(
        a=st.floats(min_value=-5, max_value=5),
        b=st.floats(min_value=-5, max_value=5),
    )
    def test_apply_is_linear(self, a, b):
        rng = np.random.default_rng(5)
        mat = rng.standard_normal((4, 4))
        op = dense_op(mat)
        x, y = rng.standard_normal(4), rng.standard_normal(4)
        np.testing.assert_allclose(
            op.apply(a * x + b * y), a * op.apply(x) + b * op.apply(y), rtol=1e-12, atol=1e-12
        )

    def test_norm_inf(self):
        assert scalar_op(-3.0).norm_inf() == 3.0
        assert diag_op([1.0, -4.0, 2.0]).norm_inf() == 4.0
        assert dense_op([[1.0, -2.0], [0.5, 0.25]]).norm_inf() == 3.0

    def test_dense_requires_square(self):
        with pytest.raises(ValueError):
            dense_op(np.ones((2, 3)))


class TestLaplacian:
    def test_stencil_d2(self):
        op = laplacian_1d(2, 1.0)
        np.testing.assert_array_equal(op.value, [[-2.0, 1.0], [1.0, -2.0]])

    def test_eigenvalues_d3_closed_form(self):
        eig = np.sort(laplacian_1d(3, 1.0).eigenvalues())
        expected = np.sort([-2.0 - np.sqrt(2.0), -2.0, -2.0 + np.sqrt(2.0)])
        np.testing.assert_allclose(eig, expected, rtol=1e-12)

    def test_eigenvalues_match_cosine_formula(self):
        d, h = 12, 0.25
        eig = np.sort(laplacian_1d(d, h).eigenvalues())
        k = np.arange(1, d + 1)
        expected = np.sort((-2.0 + 2.0 * np.cos(k * np.pi / (d + 1))) / h**2)
        np.testing.assert_allclose(eig, expected, rtol=1e-10)

    def test_symmetric(self):
        mat = laplacian_1d(7, 0.5).value
        np.testing.assert_array_equal(mat, mat.T)

    def test_all_eigenvalues_negative(self):
        assert np.all(laplacian_1d(9, 0.1).eigenvalues() < 0)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            laplacian_1d(1, 1.0)
        with pytest.raises(ValueError):
            laplacian_1d(4, 0.0)


class TestResolvent:
    def test_zero_operator_gives_identity(self):
        for op in (scalar_op(0.0, dim=2), diag_op([0.0, 0.0]), dense_op(np.zeros((2, 2)))):
            handle = resolvent_handle(op, 1.5, 0.1)
            x = np.array([3.0, -1.0])
            np.testing.assert_allclose(resolvent_apply(handle, x), x, rtol=1e-14)

    def test_scalar_closed_form(self):
        handle = resolvent_handle(scalar_op(-1.0), 1.5, 0.5)
        expected = 2.0**1.5 / (2.0**1.5 + 1.0)
        np.testing.assert_allclose(resolvent_apply(handle, np.array([1.0])), [expected], rtol=1e-15)
        assert expected == pytest.approx(0.738796, abs=1e-6)

    def test_diagonal_decouples_to_scalars(self):
        lams = np.array([-1.0, -0.5, 2.0])
        handle = resolvent_handle(diag_op(lams), 1.2, 0.3)
        x = np.array([1.0, 1.0, 1.0])
        shift = 0.3**-1.2
        np.testing.assert_allclose(
            resolvent_apply(handle, x), shift / (shift - lams), rtol=1e-14
        )

    def test_dense_agrees_with_diagonal(self):
        lams = np.array([-2.0, -0.25])
        hd = resolvent_handle(diag_op(lams), 1.5, 0.2)
        hf = resolvent_handle(dense_op(np.diag(lams)), 1.5, 0.2)
        x = np.array([1.0, -3.0])
        np.testing.assert_allclose(
            resolvent_apply(hd, x), resolvent_apply(hf, x), rtol=1e-13
        )

    @pytest.mark.parametrize("alpha,tau", [(1.5, 0.1), (0.7, 0.25), (1.0, 0.5)])
    def test_shifted_identity_residual(self, alpha, tau):
        op = laplacian_1d(10, 0.5)
        handle = resolvent_handle(op, alpha, tau)
        rng = np.random.default_rng(2)
        x = rng.standard_normal(10)
        y = resolvent_apply(handle, x)
        back = tau**alpha * (tau**-alpha * y - op.apply(y))
        assert np.linalg.norm(back - x) <= 1e-12 * np.linalg.norm(x)

    def test_matrix_right_hand_sides(self):
        op = laplacian_1d(5, 1.0)
        handle = resolvent_handle(op, 1.5, 0.1)
        eye = np.eye(5)
        r = handle.shift * handle.solve(eye)
        mat = handle.shift * eye - op.value
        np.testing.assert_allclose(mat @ r, handle.shift * eye, rtol=0, atol=1e-12)


class TestResolventSetErrors:
    def test_scalar_at_shift(self):
        tau, alpha = 0.5, 1.0
        with pytest.raises(ResolventSetError):
            resolvent_handle(scalar_op(tau**-alpha), alpha, tau)

    def test_diag_near_singular(self):
        shift = 0.5**-1.0
        with pytest.raises(ResolventSetError):
            resolvent_handle(diag_op([shift * (1.0 + 1e-15), -1.0]), 1.0, 0.5)

    def test_dense_singular_shift(self):
        shift = 0.1**-1.5
        op = dense_op(shift * np.eye(3))
        with pytest.raises(ResolventSetError):
            resolvent_handle(op, 1.5, 0.1)

    def test_error_names_the_shift(self):
        with pytest.raises(ResolventSetError, match="resolvent set"):
            resolvent_handle(scalar_op(2.0**1.5), 1.5, 0.5)


class TestDescriptors:
    def test_scalar(self):
        op = op_from_descriptor("scalar:-1.5")
        assert op.kind == "scalar" and float(op.value) == -1.5

    def test_diag(self):
        op = op_from_descriptor("diag:1,-2,0.5")
        np.testing.assert_array_equal(op.value, [1.0, -2.0, 0.5])

    def test_laplacian(self):
        op = op_from_descriptor("laplacian:32:0.03125")
        assert op.dim == 32
        assert op.value[0, 0] == pytest.approx(-2.0 / 0.03125**2)

    def test_file(self, tmp_path):
        path = tmp_path / "mat.txt"
        path.write_text("1.0 2.0\n3.0 4.0\n")
        op = op_from_descriptor(f"file:{path}")
        np.testing.assert_array_equal(op.value, [[1.0, 2.0], [3.0, 4.0]])

    def test_matrix_file_rejects_nonsquare(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1.0 2.0 3.0\n4.0 5.0 6.0\n")
        with pytest.raises(ValueError):
            op_from_matrix_file(path)

    @pytest.mark.parametrize("text", ["scalar", "laplacian:4", "unknown:1", "diag:"])
    def test_malformed(self, text):
        with pytest.raises(ValueError):
            op_from_descriptor(text)

    def test_descriptor_round_trip(self):
        op = op_from_descriptor("scalar:-1")
        assert op_from_descriptor(op.descriptor()).value == op.value
