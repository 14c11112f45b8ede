"""Schroedinger integration in the working and physical frames.

Three generators are exposed: the full working-frame generator G = H - Sigma
(whose evolution conserves the physical norm <psi|Theta(tau)|psi>), its
adiabatic truncation G = H (which visibly does not, the Coriolis term being
anything but small here), and the physical-frame Hermitian partner h (which
conserves the plain Euclidean norm). A fixed-step classical 4th-order
integrator keeps runs deterministic; the tau = 1 singularity is never probed
by the ODE path, only through closed-form diagnostics.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import maps, metric, model
from .errors import ContractError, DomainError, InstabilityError

#: the ODE path never integrates past this point; the Coriolis term grows
#: like 1/(1 - tau) and step control is not adaptive
TAU_CEILING = 0.99

_DRIFT_LIMIT = 1e-3


class Frame(str, enum.Enum):
    """Which generator drives the integration."""

    S_FULL = "s-full"
    S_ADIABATIC = "s-adiabatic"
    P_FRAME = "p-frame"


@dataclass(frozen=True)
class EvolutionConfig:
    n: int
    tau0: float
    tau1: float
    step: float
    frame: Frame

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ContractError("n must be >= 2")
        if not 0.0 <= self.tau0 < self.tau1:
            raise ContractError("need 0 <= tau0 < tau1")
        if self.tau1 >= 1.0:
            raise DomainError("tau1 must be < 1: horizon excluded")
        if self.tau1 > TAU_CEILING:
            raise DomainError(f"tau1 must be <= {TAU_CEILING} for the ODE path")
        if not self.step > 0.0:
            raise ContractError("step must be positive")
        if self.step > (self.tau1 - self.tau0) / 10.0:
            raise ContractError("step must be <= (tau1 - tau0)/10")


@dataclass(frozen=True)
class EvolutionTrajectory:
    """States on the time grid plus the physical-norm series.

    phys_norm is <psi|Theta(tau)|psi> with the minimal metric for the
    working-frame runs (including adiabatic ones, so drift is a meaningful
    violation signal) and the Euclidean norm ||psi||^2 in the physical frame.
    """

    frame: Frame
    taus: np.ndarray
    states: np.ndarray
    phys_norm: np.ndarray


def _theta_series(n: int, taus: np.ndarray) -> np.ndarray:
    coeffs = np.stack(metric.solve_metric_polynomial(n).coeffs)
    powers = (-taus[:, None]) ** np.arange(n)[None, :]
    return np.einsum("tj,jab->tab", powers, coeffs)


def _phys_norm_series(n: int, frame: Frame, taus, states) -> np.ndarray:
    if frame is Frame.P_FRAME:
        return np.einsum("ti,ti->t", states.conj(), states).real
    thetas = _theta_series(n, taus)
    return np.einsum("ti,tij,tj->t", states.conj(), thetas, states).real


def _make_generator(config: EvolutionConfig):
    inst = model.model_instance(config.n, 0.0)
    d, a = inst.d, inst.a
    n = config.n
    if config.frame is Frame.S_ADIABATIC:
        return lambda t: d + t * a
    fact = maps.factorize(n, config.tau0)
    q = fact.q
    k = np.arange(1, n + 1)
    if config.frame is Frame.S_FULL:
        # Sigma(t) = (i/2) Q diag(-(k-1)/(1-t) + (n-k)/(1+t)) Q^T
        s_lo = (q * (k - 1.0)) @ q.T
        s_hi = (q * (n - k).astype(float)) @ q.T
        return lambda t: d + t * a + 0.5j * (s_lo / (1.0 - t) - s_hi / (1.0 + t))
    # physical frame: h(t) = diag(sq) Q^T H(t) Q diag(1/sq), sq = sqrt(theta_k)
    dq = q.T @ d @ q
    aq = q.T @ a @ q
    expo = k - 1.0
    rexpo = n - k.astype(float)

    def h_frame(t):
        sq = np.sqrt((1.0 - t) ** expo * (1.0 + t) ** rexpo)
        return (sq[:, None] / sq[None, :]) * (dq + t * aq)

    return h_frame


def evolve(config: EvolutionConfig, psi0) -> EvolutionTrajectory:
    """Integrate i dpsi/dtau = G(tau) psi with fixed-step classical RK4.

    Records the state and the physical norm at every grid point. For the
    norm-conserving frames a relative drift beyond 1e-3 raises
    InstabilityError (the step is too coarse); adiabatic runs are exempt
    since their drift is the physics being exhibited.
    """
    psi = np.asarray(psi0, dtype=complex).ravel()
    if psi.shape[0] != config.n:
        raise ContractError(f"psi0 must have length {config.n}")
    if not np.linalg.norm(psi) > 0.0:
        raise ContractError("psi0 must be nonzero")

    gen = _make_generator(config)
    nsteps = max(int(round((config.tau1 - config.tau0) / config.step)), 10)
    h = (config.tau1 - config.tau0) / nsteps

    taus = config.tau0 + h * np.arange(nsteps + 1)
    states = np.empty((nsteps + 1, config.n), dtype=complex)
    states[0] = psi
    for i in range(nsteps):
        t = taus[i]
        g_mid = gen(t + 0.5 * h)
        k1 = -1j * (gen(t) @ psi)
        k2 = -1j * (g_mid @ (psi + 0.5 * h * k1))
        k3 = -1j * (g_mid @ (psi + 0.5 * h * k2))
        k4 = -1j * (gen(t + h) @ (psi + h * k3))
        psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        states[i + 1] = psi

    phys = _phys_norm_series(config.n, config.frame, taus, states)
    if config.frame is not Frame.S_ADIABATIC:
        drift = np.abs(phys - phys[0]).max() / phys[0]
        if drift > _DRIFT_LIMIT:
            raise InstabilityError(
                f"norm drifted by {drift:.3e} over the run; use a smaller step"
            )
    return EvolutionTrajectory(frame=config.frame, taus=taus, states=states, phys_norm=phys)


def frame_transport(trajectory: EvolutionTrajectory) -> EvolutionTrajectory:
    """Map a full working-frame trajectory into the physical frame,
    psi -> Omega(tau) psi, pointwise along the grid.

    The result coincides (to integration accuracy) with integrating the
    physical-frame equation directly from Omega(tau0) psi0, and its
    Euclidean norm equals the physical norm of the input.
    """
    if trajectory.frame is not Frame.S_FULL:
        raise ContractError("frame_transport expects a full working-frame trajectory")
    n = trajectory.states.shape[1]
    fact = maps.factorize(n, trajectory.taus[0])
    k = np.arange(1, n + 1)
    sqrt_thetas = np.sqrt(
        (1.0 - trajectory.taus[:, None]) ** (k - 1.0)
        * (1.0 + trajectory.taus[:, None]) ** (n - k.astype(float))
    )
    states = (trajectory.states @ fact.q) * sqrt_thetas
    phys = np.einsum("ti,ti->t", states.conj(), states).real
    return EvolutionTrajectory(
        frame=Frame.P_FRAME, taus=trajectory.taus, states=states, phys_norm=phys
    )


@dataclass(frozen=True)
class HorizonReport:
    """Closed-form diagnostics of the approach to the tau = 1 collapse."""

    n: int
    taus: np.ndarray
    anisotropy: np.ndarray
    coriolis_norm: np.ndarray
    defectiveness: np.ndarray
    min_theta: np.ndarray

    COLUMNS = ("tau", "anisotropy", "coriolis_norm", "defectiveness", "min_theta")

    def rows(self):
        for i in range(len(self.taus)):
            yield (
                self.taus[i],
                self.anisotropy[i],
                self.coriolis_norm[i],
                self.defectiveness[i],
                self.min_theta[i],
            )


def horizon_approach_report(n: int, tau_max: float, points: int = 10) -> HorizonReport:
    """Tabulate, on an inclusive grid [0, tau_max], the metric anisotropy
    ((1+tau)/(1-tau))^(N-1), the Coriolis norm, the defectiveness gauge of
    the eigenvector matrix and the smallest metric eigenvalue (1-tau)^(N-1).

    All columns but the Coriolis norm are monotone; together they quantify
    the steady fall toward the rank-one, Jordan-block endpoint.
    """
    tau_max = float(tau_max)
    if not 0.0 < tau_max < 1.0:
        raise DomainError("tau_max must lie in (0, 1)")
    if points < 2:
        raise ContractError("need at least 2 grid points")
    taus = np.linspace(0.0, tau_max, points)
    aniso = ((1.0 + taus) / (1.0 - taus)) ** (n - 1)
    min_theta = (1.0 - taus) ** (n - 1)
    cor = np.array(
        [np.abs(maps.coriolis_spectral(n, t).sigma).max() for t in taus]
    )
    gauge = np.array([model.defectiveness_gauge(n, t) for t in taus])
    return HorizonReport(
        n=int(n), taus=taus, anisotropy=aniso, coriolis_norm=cor,
        defectiveness=gauge, min_theta=min_theta,
    )
