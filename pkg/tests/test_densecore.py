import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ptqm import densecore, maps
from ptqm.errors import ContractError, DomainError, SingularMatrixError


class TestSymEig:
    def test_identity(self):
        w, v = densecore.sym_eig(np.eye(2))
        np.testing.assert_allclose(w, [1.0, 1.0])
        np.testing.assert_allclose(v @ v.T, np.eye(2), atol=1e-14)

    def test_exchange_matrix(self):
        w, v = densecore.sym_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
        np.testing.assert_allclose(w, [-1.0, 1.0], atol=1e-14)
        s = 1.0 / math.sqrt(2.0)
        np.testing.assert_allclose(v[:, 0], [s, -s], atol=1e-14)
        np.testing.assert_allclose(v[:, 1], [s, s], atol=1e-14)

    def test_minimal_n2_metric_at_half(self):
        theta = np.array([[1.0, -0.5], [-0.5, 1.0]])
        w, _ = densecore.sym_eig(theta)
        np.testing.assert_allclose(w, [0.5, 1.5], atol=1e-14)

    def test_rejects_asymmetric(self):
        with pytest.raises(ContractError):
            densecore.sym_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_nonsquare(self):
        with pytest.raises(ContractError):
            densecore.sym_eig(np.zeros((2, 3)))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(2, 16), st.integers(0, 2**31 - 1))
    def test_reconstruction_random(self, n, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((n, n))
        m = a + a.T
        w, v = densecore.sym_eig(m)
        scale = max(densecore.max_abs(m), 1.0)
        assert densecore.max_abs((v * w) @ v.T - m) <= 1e-10 * scale

    def test_sign_convention(self):
        rng = np.random.default_rng(7)
        a = rng.standard_normal((5, 5))
        _, v = densecore.sym_eig(a + a.T)
        for j in range(5):
            col = v[:, j]
            lead = col[np.argmax(np.abs(col) > 1e-12)]
            assert lead > 0.0


class TestNullspace:
    def test_zero_matrix(self):
        basis = densecore.nullspace(np.zeros((2, 2)), tol=1e-12)
        assert basis.shape == (2, 2)
        np.testing.assert_allclose(basis.T @ basis, np.eye(2), atol=1e-14)

    def test_identity(self):
        basis = densecore.nullspace(np.eye(3), tol=1e-12)
        assert basis.shape[1] == 0

    def test_single_constraint(self):
        basis = densecore.nullspace(np.array([[1.0, 1.0]]), tol=1e-12)
        assert basis.shape == (2, 1)
        s = 1.0 / math.sqrt(2.0)
        np.testing.assert_allclose(basis[:, 0], [s, -s], atol=1e-14)

    def test_requires_positive_tol(self):
        with pytest.raises(ContractError):
            densecore.nullspace(np.eye(2), tol=0.0)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 2**31 - 1))
    def test_rank_nullity(self, rows, cols, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((rows, cols))
        basis = densecore.nullspace(a, tol=1e-10)
        rank = np.linalg.matrix_rank(a, tol=1e-10)
        assert basis.shape[1] + rank == cols
        if basis.shape[1]:
            assert densecore.max_abs(a @ basis) <= 1e-10 * max(
                np.linalg.svd(a, compute_uv=False)[0], 1.0
            )


class TestLstsq:
    def test_identity(self):
        x = densecore.lstsq(np.eye(2), [3.0, 4.0])
        np.testing.assert_allclose(x, [3.0, 4.0])

    def test_mean(self):
        x = densecore.lstsq(np.array([[1.0], [1.0]]), [1.0, 3.0])
        np.testing.assert_allclose(x, [2.0])

    def test_overdetermined_consistent(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((6, 3))
        x_true = rng.standard_normal(3)
        x = densecore.lstsq(a, a @ x_true)
        np.testing.assert_allclose(x, x_true, atol=1e-12)
        assert np.linalg.norm(a @ x - a @ x_true) <= 1e-12

    def test_shape_mismatch(self):
        with pytest.raises(ContractError):
            densecore.lstsq(np.eye(2), [1.0, 2.0, 3.0])


class TestInverse:
    def test_diagonal(self):
        np.testing.assert_allclose(
            densecore.inverse(np.diag([2.0, 4.0])), np.diag([0.5, 0.25])
        )

    def test_rank_one_metric_at_horizon(self):
        theta_final = np.array([[1.0, -1.0], [-1.0, 1.0]])
        with pytest.raises(SingularMatrixError) as info:
            densecore.inverse(theta_final)
        assert info.value.smallest_singular_value <= 1e-14

    def test_orthogonal_gives_transpose(self):
        s = 1.0 / math.sqrt(2.0)
        q = np.array([[s, s], [s, -s]])
        np.testing.assert_allclose(densecore.inverse(q), q.T, atol=1e-14)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(2, 10), st.integers(0, 2**31 - 1))
    def test_involution(self, n, seed):
        rng = np.random.default_rng(seed)
        m = rng.standard_normal((n, n)) + n * np.eye(n)
        again = densecore.inverse(densecore.inverse(m))
        assert densecore.max_abs(again - m) <= 1e-9 * densecore.max_abs(m)


class TestFiniteDiff:
    def test_quadratic(self):
        d = densecore.finite_diff(lambda t: t * t * np.eye(2), 1.0, 1e-5)
        assert densecore.max_abs(d - 2.0 * np.eye(2)) <= 1e-9

    def test_constant(self):
        c = np.array([[1.0, 2.0], [3.0, 4.0]])
        d = densecore.finite_diff(lambda t: c, 0.3, 1e-6)
        assert densecore.max_abs(d) <= 1e-9

    def test_dyson_factor_derivative(self):
        # analytic derivative of the closed-form N=2 factor, branch order k
        fact = maps.factorize(2, 0.5)

        def domega(t):
            scale = np.array([0.5 / math.sqrt(1.0 + t), -0.5 / math.sqrt(1.0 - t)])
            return scale[:, None] * fact.q.T

        d = densecore.finite_diff(fact.omega_at, 0.5, 1e-5)
        assert densecore.max_abs(d - domega(0.5)) <= 1e-8

    def test_domain_error_near_horizon(self):
        fact = maps.factorize(2, 0.5)
        with pytest.raises(DomainError):
            densecore.finite_diff(fact.omega_at, 1.0 - 1e-6, 1e-5)

    def test_requires_positive_step(self):
        with pytest.raises(ContractError):
            densecore.finite_diff(lambda t: np.eye(2), 0.5, 0.0)
