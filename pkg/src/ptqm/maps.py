"""Dyson factorization of the minimal metric and the evolution generator.

The minimal-anisotropy metrics at a fixed dimension commute across times, so
one orthogonal basis Q diagonalizes the whole family and
Omega(tau) = diag(sqrt(theta_k(tau))) Q^T factorizes Theta = Omega^T Omega
with a time-independent Q. That makes the Coriolis term
Sigma = i Omega^-1 dOmega/dtau purely spectral: (i/2) Q diag(dlog theta_k) Q^T
with dlog theta_k = -(k-1)/(1-tau) + (N-k)/(1+tau), diverging at the tau = 1
horizon. The full evolution generator is G = H - Sigma, and the Hermitian
partner Hamiltonian in the physical frame is h = Omega H Omega^-1.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import densecore, metric, model
from .errors import DomainError, PtqmError, SingularMatrixError

_COMMUTE_TOL = 1e-10


@dataclass(frozen=True)
class DysonFactorization:
    """The time-independent eigenbasis Q plus closed-form eigenvalue branches,
    bound to one evaluation time.

    Columns of Q are ordered by branch index k (so theta_k is descending at
    fixed tau) and sign-fixed; omega evaluates diag(sqrt(theta_k)) Q^T.
    """

    n: int
    tau: float
    q: np.ndarray

    def thetas_at(self, tau: float) -> np.ndarray:
        return metric.theta_factored(self.n, tau)

    def omega_at(self, tau: float) -> np.ndarray:
        tau = float(tau)
        if not 0.0 <= tau < 1.0:
            raise SingularMatrixError(
                f"omega is singular at tau={tau}: the metric has rank one there",
                smallest_singular_value=0.0,
            )
        return np.sqrt(self.thetas_at(tau))[:, None] * self.q.T

    def omega_inverse_at(self, tau: float) -> np.ndarray:
        tau = float(tau)
        if not 0.0 <= tau < 1.0:
            raise SingularMatrixError(
                f"omega is singular at tau={tau}: the metric has rank one there",
                smallest_singular_value=0.0,
            )
        return self.q / np.sqrt(self.thetas_at(tau))[None, :]

    @property
    def thetas(self) -> np.ndarray:
        return self.thetas_at(self.tau)

    @property
    def omega(self) -> np.ndarray:
        return self.omega_at(self.tau)


@dataclass(frozen=True)
class CoriolisTerm:
    """Sigma(tau) = i Omega^-1 dOmega/dtau; purely imaginary times a real
    symmetric matrix, divergent as tau -> 1."""

    n: int
    tau: float
    sigma: np.ndarray


@dataclass(frozen=True)
class Generator:
    """The full evolution generator G(tau) = H(tau) - Sigma(tau)."""

    n: int
    tau: float
    g: np.ndarray


@functools.lru_cache(maxsize=None)
def _eigenbasis(n: int) -> np.ndarray:
    """Shared eigenbasis Q of the commuting metric family, branch-ordered.

    Diagonalizes Theta at a reference time, then verifies both that the
    family actually commutes and that the same Q reproduces Theta at a
    second time from the closed-form branches, before it is reused anywhere.
    """
    poly = metric.solve_metric_polynomial(n)
    tau_ref = 0.5
    sample = metric.assemble_metric(poly, tau_ref)
    _, vecs = densecore.sym_eig(sample.theta)
    q = np.ascontiguousarray(vecs[:, ::-1])  # ascending -> branch order k
    q = densecore.fix_signs(q)

    t1 = metric.assemble_metric(poly, 0.3).theta
    t2 = metric.assemble_metric(poly, 0.7).theta
    scale = max(densecore.max_abs(t1) * densecore.max_abs(t2), 1.0)
    if densecore.max_abs(t1 @ t2 - t2 @ t1) > _COMMUTE_TOL * scale:
        raise PtqmError(f"metric family for N={n} does not commute across times")
    rebuilt = (q * metric.theta_factored(n, 0.7)) @ q.T
    if densecore.max_abs(rebuilt - t2) > 1e-9 * max(densecore.max_abs(t2), 1.0):
        raise PtqmError(f"eigenbasis for N={n} is not time-independent")
    q.setflags(write=False)
    return q


def factorize(n: int, tau: float) -> DysonFactorization:
    """Dyson factor of the minimal metric, Omega(tau)^T Omega(tau) = Theta(tau).

    Chosen as diag(sqrt(theta_k)) Q^T rather than the symmetric square root:
    the constant Q keeps the factor closed-form in tau and makes the Coriolis
    term spectral. Raises at tau = 1 where Theta drops to rank one.
    """
    tau = float(tau)
    if tau < 0.0:
        raise DomainError(f"tau={tau} < 0 is outside the physical window")
    if tau >= 1.0:
        raise SingularMatrixError(
            "the metric has rank one at tau = 1; omega is not invertible",
            smallest_singular_value=0.0,
        )
    return DysonFactorization(n=int(n), tau=tau, q=_eigenbasis(int(n)))


def _dlog_thetas(n: int, tau: float) -> np.ndarray:
    k = np.arange(1, n + 1)
    return -(k - 1) / (1.0 - tau) + (n - k) / (1.0 + tau)


def coriolis_spectral(n: int, tau: float) -> CoriolisTerm:
    """Closed-form Coriolis term (i/2) Q diag(dlog theta_k(tau)) Q^T.

    Valid because Q is time-independent; for N = 2 this reduces to
    [[tau, 1], [1, tau]] / (2i (1 - tau^2)).
    """
    fact = factorize(n, tau)
    sym = (fact.q * (0.5 * _dlog_thetas(n, fact.tau))) @ fact.q.T
    return CoriolisTerm(n=int(n), tau=fact.tau, sigma=1j * sym)


def coriolis_numeric(n: int, tau: float, h: float) -> CoriolisTerm:
    """Finite-difference Coriolis term i Omega^-1 (central dOmega/dtau);
    agrees with the spectral form to O(h^2)."""
    tau = float(tau)
    if not (0.0 < tau - h and tau + h < 1.0):
        raise DomainError(
            f"central difference at tau={tau} with h={h} leaves the domain (0, 1)"
        )
    fact = factorize(n, tau)
    domega = densecore.finite_diff(fact.omega_at, tau, h)
    sigma = 1j * fact.omega_inverse_at(tau) @ domega
    return CoriolisTerm(n=int(n), tau=tau, sigma=sigma)


def generator(n: int, tau: float) -> Generator:
    """The full (non-adiabatic) generator G = H - Sigma."""
    sigma = coriolis_spectral(n, tau).sigma
    h = model.build_hamiltonian(n, tau)
    return Generator(n=int(n), tau=float(tau), g=h - sigma)


def dyson_hamiltonian(n: int, tau: float) -> np.ndarray:
    """The Hermitian partner h = Omega H Omega^-1 in the physical frame.

    Symmetric (that is exactly the intertwining property of the metric) and
    isospectral with H; computed stably as an entrywise scaling of Q^T H Q.
    """
    fact = factorize(n, tau)
    sq = np.sqrt(fact.thetas)
    core = fact.q.T @ model.build_hamiltonian(n, fact.tau) @ fact.q
    return (sq[:, None] / sq[None, :]) * core
