import math

import numpy as np
import pytest

from ptqm import densecore, metric, model
from ptqm.errors import (
    ContractError,
    DomainError,
    PositivityError,
)


class TestAlphaFamily:
    def test_isotropic_onset(self):
        sample = metric.metric_n2_alpha(0.0, math.pi / 4)
        np.testing.assert_allclose(sample.theta, np.eye(2), atol=1e-15)
        np.testing.assert_allclose(sample.eigenvalues, [1.0, 1.0], atol=1e-15)

    @pytest.mark.parametrize("tau", [0.1, 0.5, 0.9])
    def test_minimal_member_eigenvalues(self, tau):
        # at alpha = pi/4 the gap formula collapses to 1 -+ tau
        sample = metric.metric_n2_alpha(tau, math.pi / 4)
        np.testing.assert_allclose(
            sample.eigenvalues, [1.0 - tau, 1.0 + tau], atol=1e-14
        )

    def test_generic_member(self):
        sample = metric.metric_n2_alpha(0.6, math.pi / 6)
        gap = math.sqrt(0.52)  # 1 - 0.64 * 0.75
        np.testing.assert_allclose(
            sample.eigenvalues, [1.0 - gap, 1.0 + gap], atol=1e-14
        )
        w, _ = densecore.sym_eig(sample.theta)
        np.testing.assert_allclose(w, sample.eigenvalues, atol=1e-14)

    @pytest.mark.parametrize("alpha", [0.0, math.pi / 2, -0.3, 2.0])
    def test_positivity_window(self, alpha):
        with pytest.raises(PositivityError):
            metric.metric_n2_alpha(0.5, alpha)

    def test_compatible_for_any_alpha(self):
        h = model.build_hamiltonian(2, 0.7)
        for alpha in np.linspace(0.05, math.pi / 2 - 0.05, 9):
            theta = metric.metric_n2_alpha(0.7, alpha).theta
            assert metric.compatibility_residual(h, theta) <= 1e-12


class TestHyperbolicFamily:
    def test_trivial_point(self):
        sample, tau = metric.metric_n2_hyperbolic(0.0, 0.0)
        np.testing.assert_allclose(sample.theta, np.eye(2), atol=1e-15)
        assert tau == 0.0

    def test_zero_skew_is_minimal(self):
        nu = -0.4
        sample, tau = metric.metric_n2_hyperbolic(nu, 0.0)
        assert tau == pytest.approx(-math.tanh(nu))
        ratio = sample.eigenvalues / np.array([1.0 - tau, 1.0 + tau])
        assert abs(ratio[0] - ratio[1]) <= 1e-12

    def test_unit_determinant(self):
        sample, _ = metric.metric_n2_hyperbolic(-0.5, 0.3)
        assert np.linalg.det(sample.theta) == pytest.approx(1.0, abs=1e-12)
        assert sample.eigenvalues[0] * sample.eigenvalues[1] == pytest.approx(
            1.0, abs=1e-12
        )

    def test_eigenvalue_closed_form(self):
        nu, rho = -0.7, 0.4
        sample, _ = metric.metric_n2_hyperbolic(nu, rho)
        c = math.cosh(nu) * math.cosh(rho)
        want = [c - math.sqrt(c * c - 1.0), c + math.sqrt(c * c - 1.0)]
        np.testing.assert_allclose(sample.eigenvalues, want, atol=1e-12)
        w, _ = densecore.sym_eig(sample.theta)
        np.testing.assert_allclose(w, want, atol=1e-12)

    def test_compatibility_at_induced_time(self):
        sample, tau = metric.metric_n2_hyperbolic(-0.8, 0.6)
        h = model.build_hamiltonian(2, tau)
        assert metric.compatibility_residual(h, sample.theta) <= 1e-12

    def test_positive_nu_rejected(self):
        with pytest.raises(DomainError):
            metric.metric_n2_hyperbolic(0.2, 0.0)

    def test_skew_bound_at_fixed_time(self):
        nu, rho = metric.hyperbolic_parameters(0.5, 1.0)
        assert -math.tanh(nu) / math.cosh(rho) == pytest.approx(0.5, abs=1e-12)
        rho_max = math.acosh(1.0 / 0.5)
        with pytest.raises(DomainError, match="rho_max"):
            metric.hyperbolic_parameters(0.5, rho_max + 1e-9)

    def test_chart_roundtrip(self):
        point = metric.N2FamilyPoint.from_alpha(0.6, 0.7)
        assert point.induced_tau == pytest.approx(0.6, abs=1e-12)
        assert point.eps == 1
        assert point.nu <= 0.0
        again = metric.N2FamilyPoint.from_hyperbolic(point.nu, point.rho)
        assert again.alpha_angle == pytest.approx(0.7, abs=1e-12)
        assert point.kappa_plus == pytest.approx(math.sin(0.7))
        assert point.kappa_minus == pytest.approx(math.cos(0.7))
        lo, hi = point.theta_pair
        assert lo > 0.0 and hi > 0.0


class TestGFamily:
    def test_matrix_literal(self):
        tau, g = 0.5, 1.3
        s2 = math.sqrt(2.0)
        want = np.array(
            [
                [1.0, -s2 * g * tau, g * tau * tau],
                [-s2 * g * tau, 2.0 * g - 1.0 + g * tau * tau, -s2 * g * tau],
                [g * tau * tau, -s2 * g * tau, 1.0],
            ]
        )
        np.testing.assert_allclose(metric.metric_n3_gfamily(tau, g).theta, want)

    @pytest.mark.parametrize("tau", [0.0, 0.25, 0.6, 0.95, 1.0])
    @pytest.mark.parametrize("g", [0.6, 1.0, 1.2, 2.5])
    def test_triple_matches_eigensolve(self, tau, g):
        sample = metric.metric_n3_gfamily(tau, g)
        num = np.linalg.eigvalsh(sample.theta)
        assert densecore.max_abs(np.sort(sample.eigenvalues) - num) <= 1e-10

    @pytest.mark.parametrize("tau", [0.2, 0.5, 0.8])
    def test_correct_member_factorizes(self, tau):
        triple = sorted(metric.metric_n3_eigen_triple(tau, 1.0))
        want = sorted([(1.0 - tau) ** 2, 1.0 - tau * tau, (1.0 + tau) ** 2])
        np.testing.assert_allclose(triple, want, atol=1e-14)

    def test_too_large_g_not_isotropic_at_onset(self):
        sample = metric.metric_n3_gfamily(0.0, 1.2)
        np.testing.assert_allclose(sample.eigenvalues, [1.0, 1.0, 1.4], atol=1e-14)

    def test_too_small_g_loses_positivity_early(self):
        tau_star = math.sqrt(0.75)
        before = metric.metric_n3_gfamily(tau_star - 1e-3, 0.8)
        after = metric.metric_n3_gfamily(tau_star + 1e-3, 0.8)
        assert before.eigenvalues[0] > 0.0
        assert after.eigenvalues[0] < 0.0

    def test_compatibility_any_g(self):
        for tau in (0.3, 0.9):
            h = model.build_hamiltonian(3, tau)
            for g in (-0.5, 0.8, 1.0, 3.0):
                theta = metric.metric_n3_gfamily(tau, g).theta
                assert metric.compatibility_residual(h, theta) <= 1e-12


class TestPositivityBoundary:
    def test_correct_member_survives_to_horizon(self):
        assert metric.positivity_boundary_n3(1.0) == pytest.approx(1.0, abs=1e-9)

    def test_small_g(self):
        assert metric.positivity_boundary_n3(0.8) == pytest.approx(
            math.sqrt(0.75), abs=1e-9
        )
        assert metric.positivity_boundary_n3(0.6) == pytest.approx(
            math.sqrt(2.0 - 1.0 / 0.6), abs=1e-9
        )

    def test_large_g(self):
        assert metric.positivity_boundary_n3(2.0) == pytest.approx(
            math.sqrt(0.5), abs=1e-9
        )

    def test_nonpositive_from_onset(self):
        assert metric.positivity_boundary_n3(0.3) == 0.0
        assert metric.positivity_boundary_n3(0.5) == 0.0

    def test_requires_positive_g(self):
        with pytest.raises(ContractError):
            metric.positivity_boundary_n3(0.0)


class TestSpectralMetric:
    def test_exact_alpha_correspondence(self):
        # weights proportional to (cos^2 a, sin^2 a) in ascending-level order
        # reproduce the alpha-family matrix exactly
        tau, alpha = 0.6, 0.7
        kappa = np.array([2.0 * math.cos(alpha) ** 2, 2.0 * math.sin(alpha) ** 2])
        sample = metric.spectral_metric(2, tau, kappa)
        want = metric.metric_n2_alpha(tau, alpha).theta
        assert densecore.max_abs(sample.theta - want) <= 1e-12

    def test_sin_cos_weights_land_in_family(self):
        # the plain (sin a, cos a) weights give the family member at
        # cos 2a' = (cos a - sin a)/(cos a + sin a), scaled by (sin a + cos a)/2
        tau, alpha = 0.45, 0.9
        kappa = np.array([math.cos(alpha), math.sin(alpha)])  # ascending order
        sample = metric.spectral_metric(2, tau, kappa)
        alpha_eff = 0.5 * math.acos(
            (math.cos(alpha) - math.sin(alpha)) / (math.cos(alpha) + math.sin(alpha))
        )
        scale = 0.5 * (math.sin(alpha) + math.cos(alpha))
        want = scale * metric.metric_n2_alpha(tau, alpha_eff).theta
        assert densecore.max_abs(sample.theta - want) <= 1e-12

    def test_equal_weights_give_minimal_ray(self):
        tau = 0.35
        sample = metric.spectral_metric(2, tau, [0.7, 0.7])
        want = 0.7 * np.array([[1.0, -tau], [-tau, 1.0]])
        assert densecore.max_abs(sample.theta - want) <= 1e-12

    def test_compatibility_random_weights(self):
        rng = np.random.default_rng(42)
        for n, tau in [(3, 0.4), (4, 0.7), (5, 0.9)]:
            h = model.build_hamiltonian(n, tau)
            for _ in range(5):
                kappa = rng.uniform(0.1, 3.0, n)
                sample = metric.spectral_metric(n, tau, kappa)
                assert metric.compatibility_residual(h, sample.theta) <= 1e-9
                assert sample.eigenvalues[0] > 0.0

    def test_rejects_nonpositive_weights(self):
        with pytest.raises(PositivityError):
            metric.spectral_metric(2, 0.5, [1.0, 0.0])
        with pytest.raises(PositivityError):
            metric.spectral_metric(3, 0.5, [1.0, -0.5, 2.0])

    def test_rejects_bad_length(self):
        with pytest.raises(ContractError):
            metric.spectral_metric(3, 0.5, [1.0, 1.0])


class TestAnisotropy:
    def test_identity(self):
        sample = metric.MetricSample(
            n=2, tau=0.0, theta=np.eye(2), eigenvalues=np.array([1.0, 1.0])
        )
        assert metric.anisotropy(sample) == 1.0

    def test_minimal_values(self):
        assert metric.anisotropy(metric.minimal_metric(2, 0.5)) == pytest.approx(
            3.0, rel=1e-12
        )
        assert metric.anisotropy(metric.minimal_metric(4, 0.5)) == pytest.approx(
            27.0, rel=1e-10
        )

    def test_condition_law(self):
        for n in (2, 3, 5):
            for tau in (0.2, 0.6, 0.9):
                got = metric.anisotropy(metric.minimal_metric(n, tau))
                want = ((1.0 + tau) / (1.0 - tau)) ** (n - 1)
                assert got == pytest.approx(want, rel=1e-9)

    def test_rejects_nonpositive(self):
        bad = metric.metric_n3_gfamily(0.95, 0.8)
        with pytest.raises(PositivityError):
            metric.anisotropy(bad)


class TestMinimizeAnisotropy:
    @pytest.mark.parametrize("tau", [0.25, 0.5, 0.75])
    def test_n2_lands_on_minimal_spectrum(self, tau):
        _, sample = metric.minimize_anisotropy(2, tau)
        ratio = sample.eigenvalues / np.array([1.0 - tau, 1.0 + tau])
        spread = (ratio.max() - ratio.min()) / ratio.mean()
        assert spread <= 1e-4

    def test_n3_lands_on_g_equals_one(self):
        tau = 0.5
        _, sample = metric.minimize_anisotropy(3, tau)
        assert metric.anisotropy(sample) == pytest.approx(9.0, rel=1e-6)
        want = metric.minimal_metric(3, tau).theta
        scale = sample.theta[0, 0] / want[0, 0]
        assert densecore.max_abs(sample.theta - scale * want) <= 1e-5

    def test_weights_normalized(self):
        kappa, _ = metric.minimize_anisotropy(4, 0.4)
        assert kappa.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(kappa > 0.0)

    def test_oracle_scale_enforced(self):
        with pytest.raises(ContractError):
            metric.minimize_anisotropy(6, 0.5)
        with pytest.raises(ContractError):
            metric.minimize_anisotropy(3, 0.95)
