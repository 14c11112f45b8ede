"""Hilbert-space metrics compatible with the N-level family.

A positive matrix Theta makes H self-adjoint in the inner product
<.|Theta|.> exactly when it intertwines H with its transpose,
H^T Theta = Theta H. This module constructs and analyzes:

* the full parametric families at N = 2 (angle and hyperbolic forms) and
  N = 3 (one residual parameter g),
* the unique minimal-anisotropy metric at any N, as the polynomial
  Theta(tau) = sum_j (-tau)^(j-1) M(j) with banded coefficient matrices,
  solved from the stacked intertwining equations with M(1) = I,
* the tabulated closed-form coefficient bands, the integer eigenvalue
  coefficient table (a signed Pascal triangle), and the closed-form metric
  spectrum (1-tau)^(k-1) (1+tau)^(N-k),
* the spectral (kappa-weighted ketket) representation and the numerical
  condition-number minimization over it, kept as an independent oracle for
  the minimal metric.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from . import densecore, model
from .errors import (
    AmbiguityError,
    ContractError,
    ConvergenceError,
    DomainError,
    NotTabulatedError,
    PositivityError,
    PtqmError,
)

_BISECT_TOL = 1e-10
_NULLSPACE_TOL = 1e-10


@dataclass(frozen=True)
class MetricSample:
    """A metric evaluated at one time: the matrix and its ascending spectrum."""

    n: int
    tau: float
    theta: np.ndarray
    eigenvalues: np.ndarray


@dataclass(frozen=True)
class MetricPolynomial:
    """Coefficients M(1)..M(N) of Theta(tau) = sum_j (-tau)^(j-1) M(j).

    M(k) is nonzero only on the diagonals col - row in
    {k-1, k-3, ..., -(k-1)}; each M(k) is symmetric and persymmetric and the
    assembled Theta intertwines H with H^T identically in tau. M(1) = I fixes
    the otherwise free overall scale.
    """

    n: int
    coeffs: tuple[np.ndarray, ...]

    def alpha_array(self, k: int) -> np.ndarray:
        """The k x (N-k+1) array of nonzero entries of M(k), band by band."""
        if k < 1 or k > self.n:
            raise ContractError(f"band index k={k} outside 1..{self.n}")
        mk = self.coeffs[k - 1]
        out = np.empty((k, self.n - k + 1))
        for row, col, j, m in _pattern_positions(self.n, k):
            out[j, m] = mk[row, col]
        return out


@dataclass(frozen=True)
class CoefficientArray:
    """Closed-form band entries of one coefficient matrix M(k)."""

    n: int
    k: int
    values: np.ndarray


@dataclass(frozen=True)
class PascalTable:
    """Integer coefficients C[k, m] of the metric eigenvalue polynomials.

    theta_k(tau) = sum_m C[k, m] tau^(m-1). Row k = 1 is the plain binomial
    row; every later row sums to zero. Stored 0-indexed, integer exact.
    """

    n: int
    c: np.ndarray

    def eigenvalues(self, tau: float) -> np.ndarray:
        """The N eigenvalue polynomials evaluated at tau, in branch order k."""
        powers = float(tau) ** np.arange(self.n)
        return self.c.astype(float) @ powers


@dataclass(frozen=True)
class N2FamilyPoint:
    """One member of the two-parameter N = 2 metric family, in both charts.

    The hyperbolic chart (nu, rho) fixes det Theta = 1 with
    a, d = cosh(nu) exp(+-rho), b = sinh(nu); the angle chart (r, alpha)
    writes the same ray of metrics through kappa_plus = sin(alpha),
    kappa_minus = cos(alpha). The induced time is tau = -tanh(nu)/cosh(rho),
    so evolving metrics need nu <= 0, and positivity fixes eps = +1.
    """

    nu: float
    rho: float
    eps: int
    alpha_angle: float
    r: float
    kappa_plus: float
    kappa_minus: float

    @property
    def induced_tau(self) -> float:
        return -math.tanh(self.nu) / math.cosh(self.rho)

    @property
    def theta_pair(self) -> tuple[float, float]:
        """Metric eigenvalues of the det-1 representative, (minus, plus)."""
        c = math.cosh(self.nu) * math.cosh(self.rho)
        s = math.sqrt(c * c - 1.0)
        return c - s, c + s

    @classmethod
    def from_hyperbolic(cls, nu: float, rho: float) -> "N2FamilyPoint":
        nu, rho = float(nu), float(rho)
        if nu > 0.0:
            raise DomainError("nu must be <= 0 so the induced time is nonnegative")
        tau = -math.tanh(nu) / math.cosh(rho)
        r = math.sqrt(1.0 - tau * tau)
        cos2a = math.tanh(rho) / r if r > 0.0 else 0.0
        sin2a = 1.0 / (r * math.cosh(nu) * math.cosh(rho)) if r > 0.0 else 1.0
        alpha = 0.5 * math.atan2(sin2a, cos2a)
        return cls(
            nu=nu, rho=rho, eps=1, alpha_angle=alpha, r=r,
            kappa_plus=math.sin(alpha), kappa_minus=math.cos(alpha),
        )

    @classmethod
    def from_alpha(cls, tau: float, alpha_angle: float) -> "N2FamilyPoint":
        tau, alpha = float(tau), float(alpha_angle)
        if not 0.0 < alpha < math.pi / 2:
            raise PositivityError("alpha must lie in (0, pi/2) for a positive metric")
        if not 0.0 <= tau < 1.0:
            raise DomainError("the det-1 chart needs 0 <= tau < 1")
        r = math.sqrt(1.0 - tau * tau)
        sin2a = math.sin(2.0 * alpha)
        # det-1 representative of the angle-chart metric
        cosh_nu = math.sqrt(1.0 - r * r * math.cos(2.0 * alpha) ** 2) / (r * sin2a)
        nu = -math.acosh(max(cosh_nu, 1.0))
        e2rho = (1.0 + r * math.cos(2.0 * alpha)) / (1.0 - r * math.cos(2.0 * alpha))
        rho = 0.5 * math.log(e2rho)
        return cls(
            nu=nu, rho=rho, eps=1, alpha_angle=alpha, r=r,
            kappa_plus=math.sin(alpha), kappa_minus=math.cos(alpha),
        )


# ---------------------------------------------------------------------------
# low-dimensional families
# ---------------------------------------------------------------------------

def metric_n2_alpha(tau: float, alpha_angle: float) -> MetricSample:
    """The N = 2 metric family parametrized by the mixing angle alpha.

    With r = sqrt(1 - tau^2) the matrix is
    [[1 + r cos 2a, -tau], [-tau, 1 - r cos 2a]] and its eigenvalues are
    1 +- sqrt(1 - r^2 sin^2 2a); both stay positive exactly for
    0 < alpha < pi/2. The choice alpha = pi/4 is the minimal-anisotropy
    member (isotropic at tau = 0).
    """
    tau = float(tau)
    if not 0.0 <= tau <= 1.0:
        raise DomainError(f"tau={tau} outside [0, 1]")
    alpha = float(alpha_angle)
    if not 0.0 < alpha < math.pi / 2:
        raise PositivityError("alpha must lie in (0, pi/2) for a positive metric")
    r = math.sqrt(1.0 - tau * tau)
    c2, s2 = math.cos(2.0 * alpha), math.sin(2.0 * alpha)
    theta = np.array([[1.0 + r * c2, -tau], [-tau, 1.0 - r * c2]])
    gap = math.sqrt(1.0 - r * r * s2 * s2)
    eigs = np.array([1.0 - gap, 1.0 + gap])
    return MetricSample(n=2, tau=tau, theta=theta, eigenvalues=eigs)


def metric_n2_hyperbolic(nu: float, rho: float) -> tuple[MetricSample, float]:
    """The N = 2 family in the det-1 hyperbolic chart; returns the sample
    and the time it is compatible with, tau = -tanh(nu)/cosh(rho).

    rho skews the main diagonal; rho = 0 is the minimal-anisotropy rule and
    gives eigenvalues proportional to 1 -+ tau.
    """
    point = N2FamilyPoint.from_hyperbolic(nu, rho)
    tau = point.induced_tau
    if abs(tau) >= 1.0:
        # unreachable for real (nu, rho) since cosh rho >= 1 > |tanh nu|;
        # kept as the documented guard for the chart boundary
        raise DomainError("parameters imply |tau| >= 1 (cosh rho_max = 1/tau)")
    a = math.cosh(nu) * math.exp(rho)
    d = math.cosh(nu) * math.exp(-rho)
    b = math.sinh(nu)
    theta = np.array([[a, b], [b, d]])
    lo, hi = point.theta_pair
    return MetricSample(n=2, tau=tau, theta=theta, eigenvalues=np.array([lo, hi])), tau


def hyperbolic_parameters(tau: float, rho: float) -> tuple[float, float]:
    """Invert the time map of the hyperbolic chart: given tau and the skew
    rho, return (nu, rho). The skew is bounded by cosh(rho_max) = 1/tau."""
    tau, rho = float(tau), float(rho)
    if not 0.0 <= tau < 1.0:
        raise DomainError(f"tau={tau} outside [0, 1)")
    x = tau * math.cosh(rho)
    if x >= 1.0:
        raise DomainError(
            f"rho={rho} exceeds rho_max at tau={tau} (cosh rho_max = 1/tau)"
        )
    return math.atanh(-x), rho


def metric_n3_eigen_triple(tau: float, g: float) -> tuple[float, float, float]:
    """Closed-form eigenvalues of the N = 3 g-family, in formula order:
    (g tau^2 + g -+ sqrt(4 g^2 tau^2 + g^2 - 2g + 1), 1 - g tau^2).

    The small branch is evaluated through its product with the large one,
    (g^2 (1-tau^2)^2 - (g-1)^2) / theta_3, which avoids the catastrophic
    cancellation of the textbook form near tau = 1.
    """
    tau, g = float(tau), float(g)
    root = math.sqrt(4.0 * g * g * tau * tau + (g - 1.0) ** 2)
    theta3 = g * tau * tau + g + root
    u = (1.0 - tau) * (1.0 + tau)
    theta1 = (g * g * u * u - (g - 1.0) ** 2) / theta3
    return theta1, 1.0 - g * tau * tau, theta3


def metric_n3_gfamily(tau: float, g: float) -> MetricSample:
    """The one-parameter N = 3 metric family with symmetric main diagonal.

    g = 1 is the minimal-anisotropy member (isotropic at tau = 0, positive
    up to tau = 1); other values are returned unrestricted so positivity
    loss can be scanned, and the sample's eigenvalues simply report it.
    """
    tau, g = float(tau), float(g)
    s2g = math.sqrt(2.0) * g
    theta = np.array(
        [
            [1.0, -s2g * tau, g * tau * tau],
            [-s2g * tau, 2.0 * g - 1.0 + g * tau * tau, -s2g * tau],
            [g * tau * tau, -s2g * tau, 1.0],
        ]
    )
    eigs = np.sort(metric_n3_eigen_triple(tau, g))
    return MetricSample(n=3, tau=tau, theta=theta, eigenvalues=eigs)


def positivity_boundary_n3(g: float) -> Optional[float]:
    """Smallest tau in (0, 1] where the N = 3 g-family stops being positive.

    Found by bisection on the closed-form minimum eigenvalue to 1e-10.
    Returns None when the metric is positive on all of (0, 1); returns 0.0
    when it is already non-positive at the onset (g <= 1/2).
    """
    g = float(g)
    if not g > 0.0:
        raise ContractError("g must be positive")

    def min_eig(t: float) -> float:
        return min(metric_n3_eigen_triple(t, g))

    if min_eig(0.0) <= 0.0:
        return 0.0
    lo, hi = 0.0, 1.0
    if min_eig(hi) > 0.0:
        return None
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if min_eig(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


# ---------------------------------------------------------------------------
# closed-form coefficient bands
# ---------------------------------------------------------------------------

def _sqrt_band(n: int) -> np.ndarray:
    k = np.arange(1, n)
    return np.sqrt(k * (n - k)).astype(float)


#: band arrays with no (yet) known closed formula, found by solving the
#: intertwining equations exactly; keyed by (n, k)
_SPECIAL_ALPHA: dict[tuple[int, int], np.ndarray] = {
    (5, 3): np.array(
        [
            [math.sqrt(6.0), 3.0, math.sqrt(6.0)],
            [3.0, 4.0, 3.0],
            [math.sqrt(6.0), 3.0, math.sqrt(6.0)],
        ]
    ),
    (6, 3): np.array(
        [
            [math.sqrt(10.0), 3.0 * math.sqrt(2.0), 3.0 * math.sqrt(2.0), math.sqrt(10.0)],
            [4.0, 6.0, 6.0, 4.0],
            [math.sqrt(10.0), 3.0 * math.sqrt(2.0), 3.0 * math.sqrt(2.0), math.sqrt(10.0)],
        ]
    ),
    (7, 3): np.array(
        [
            [math.sqrt(15.0), math.sqrt(30.0), 6.0, math.sqrt(30.0), math.sqrt(15.0)],
            [5.0, 8.0, 9.0, 8.0, 5.0],
            [math.sqrt(15.0), math.sqrt(30.0), 6.0, math.sqrt(30.0), math.sqrt(15.0)],
        ]
    ),
    (7, 4): np.array(
        [
            [2.0 * math.sqrt(5.0), 2.0 * math.sqrt(10.0), 2.0 * math.sqrt(10.0), 2.0 * math.sqrt(5.0)],
            [2.0 * math.sqrt(10.0), 6.0 * math.sqrt(3.0), 6.0 * math.sqrt(3.0), 2.0 * math.sqrt(10.0)],
            [2.0 * math.sqrt(10.0), 6.0 * math.sqrt(3.0), 6.0 * math.sqrt(3.0), 2.0 * math.sqrt(10.0)],
            [2.0 * math.sqrt(5.0), 2.0 * math.sqrt(10.0), 2.0 * math.sqrt(10.0), 2.0 * math.sqrt(5.0)],
        ]
    ),
}


def coefficient_array(n: int, k: int) -> CoefficientArray:
    """Closed-form band array alpha(k) of the coefficient matrix M(k).

    Covered: k in {1, 2, N-1, N} at any N, plus the tabulated pairs
    (5,3), (6,3), (7,3), (7,4). Anything else raises NotTabulatedError;
    solve_metric_polynomial handles the general case.
    """
    if int(n) != n or n < 2:
        raise ContractError("n must be >= 2")
    if int(k) != k or k < 1 or k > n:
        raise ContractError(f"band index k={k} outside 1..{n}")
    n, k = int(n), int(k)
    if k == 1:
        values = np.ones((1, n))
    elif k == n:
        values = np.ones((n, 1))
    elif k == 2:
        values = np.tile(_sqrt_band(n), (2, 1))
    elif k == n - 1:
        values = np.tile(_sqrt_band(n)[:, None], (1, 2))
    elif (n, k) in _SPECIAL_ALPHA:
        values = _SPECIAL_ALPHA[(n, k)].copy()
    else:
        raise NotTabulatedError(
            f"no closed-form band is tabulated for (n, k) = ({n}, {k}); "
            "use solve_metric_polynomial"
        )
    return CoefficientArray(n=n, k=k, values=values)


# ---------------------------------------------------------------------------
# the minimal-anisotropy polynomial metric, any N
# ---------------------------------------------------------------------------

def _pattern_positions(n: int, k: int):
    """0-indexed (row, col, j, m): band entry alpha[j, m] of M(k) sits at
    row = m + j, col = m + k - j - 1 for j = 0..k-1, m = 0..n-k."""
    for j in range(k):
        for m in range(n - k + 1):
            yield m + j, m + k - j - 1, j, m


@functools.lru_cache(maxsize=None)
def _solve_polynomial_cached(n: int) -> tuple[np.ndarray, ...]:
    inst = model.model_instance(n, 0.0)
    dvec = np.diag(inst.d)
    a = inst.a

    index: dict[tuple[int, int, int], int] = {}
    for k in range(2, n + 1):
        for row, col, _, _ in _pattern_positions(n, k):
            index[(k, row, col)] = len(index)
    nunk = len(index)

    # equations: one block per matched power of tau,
    #   [D, M(k)] + A M(k-1) + M(k-1) A = 0   (k = 2..n, M(1) = I)
    # plus the terminal block A M(n) + M(n) A = 0
    rows: list[np.ndarray] = []
    rhs: list[float] = []

    def emit_block(k: int) -> None:
        prev_is_identity = k - 1 == 1
        for r in range(n):
            for c in range(n):
                row = np.zeros(nunk)
                b = 0.0
                key = (k, r, c)
                if key in index:
                    row[index[key]] += dvec[r] - dvec[c]
                for s in range(n):
                    if a[r, s] != 0.0:
                        if prev_is_identity:
                            b -= a[r, s] if s == c else 0.0
                        elif (k - 1, s, c) in index:
                            row[index[(k - 1, s, c)]] += a[r, s]
                    if a[s, c] != 0.0:
                        if prev_is_identity:
                            b -= a[s, c] if r == s else 0.0
                        elif (k - 1, r, s) in index:
                            row[index[(k - 1, r, s)]] += a[s, c]
                rows.append(row)
                rhs.append(b)

    for k in range(2, n + 1):
        emit_block(k)
    for r in range(n):
        for c in range(n):
            row = np.zeros(nunk)
            for s in range(n):
                if a[r, s] != 0.0 and (n, s, c) in index:
                    row[index[(n, s, c)]] += a[r, s]
                if a[s, c] != 0.0 and (n, r, s) in index:
                    row[index[(n, r, s)]] += a[s, c]
            rows.append(row)
            rhs.append(0.0)

    amat = np.array(rows)
    bvec = np.array(rhs)

    null = densecore.nullspace(amat, tol=_NULLSPACE_TOL)
    if null.size and null.shape[1] > 0:
        raise AmbiguityError(
            f"metric-coefficient system for N={n} has a {null.shape[1]}-dimensional "
            "nullspace after fixing M(1) = I",
            nullspace_dimension=null.shape[1],
        )
    x = densecore.lstsq(amat, bvec)
    residual = densecore.max_abs(amat @ x - bvec)
    scale = max(densecore.max_abs(bvec), 1.0)
    if residual > 1e-9 * scale:
        raise PtqmError(
            f"metric-coefficient system for N={n} is inconsistent "
            f"(residual {residual:.3e})"
        )

    coeffs = [np.eye(n)]
    for k in range(2, n + 1):
        mk = np.zeros((n, n))
        for row, col, _, _ in _pattern_positions(n, k):
            mk[row, col] = x[index[(k, row, col)]]
        coeffs.append(mk)
    for mk in coeffs:
        mk.setflags(write=False)
    return tuple(coeffs)


def solve_metric_polynomial(n: int) -> MetricPolynomial:
    """The unique minimal-anisotropy metric polynomial for dimension n.

    Solves the stacked power-matched intertwining equations under the banded
    ansatz with M(1) = I, by least squares, and verifies that the system has
    zero residual and a zero-dimensional nullspace (anything else would mean
    the uniqueness of the construction broke and raises AmbiguityError).
    """
    if int(n) != n or n < 2:
        raise ContractError("n must be >= 2")
    return MetricPolynomial(n=int(n), coeffs=_solve_polynomial_cached(int(n)))


def assemble_metric(poly: MetricPolynomial, tau: float) -> MetricSample:
    """Evaluate Theta(tau) = sum_j (-tau)^(j-1) M(j) and its spectrum.

    Positive definite for 0 <= tau < 1; exactly rank one at tau = 1.
    """
    tau = float(tau)
    if not 0.0 <= tau <= 1.0:
        raise DomainError(f"tau={tau} outside [0, 1]")
    theta = np.zeros((poly.n, poly.n))
    for j, mk in enumerate(poly.coeffs):
        theta += (-tau) ** j * mk
    eigs = np.linalg.eigvalsh(theta)
    return MetricSample(n=poly.n, tau=tau, theta=theta, eigenvalues=eigs)


def minimal_metric(n: int, tau: float) -> MetricSample:
    """Convenience wrapper: the minimal-anisotropy metric at (n, tau)."""
    return assemble_metric(solve_metric_polynomial(n), tau)


def spectral_metric(n: int, tau: float, kappa) -> MetricSample:
    """General metric from the spectral formula
    Theta = sum_n kappa_n |ketket_n><ketket_n|, kappa_n > 0.

    The ketkets are the unit-normalized eigenvectors of H^T ordered by
    ascending level, so kappa is indexed the same way. Every member
    intertwines H with H^T; positivity is exactly kappa > 0.
    """
    kap = np.asarray(kappa, dtype=float).ravel()
    if kap.shape[0] != n:
        raise ContractError(f"kappa must have length {n}")
    if not np.all(kap > 0.0):
        raise PositivityError("all kappa weights must be positive")
    system = model.biorthogonal_system(n, tau)
    theta = (system.ketkets * kap) @ system.ketkets.T
    eigs = np.linalg.eigvalsh(theta)
    return MetricSample(n=int(n), tau=float(tau), theta=theta, eigenvalues=eigs)


# ---------------------------------------------------------------------------
# closed-form spectrum of the minimal metric
# ---------------------------------------------------------------------------

def _comb(a: int, b: int) -> int:
    return math.comb(a, b) if 0 <= b <= a else 0


def pascal_table(n: int) -> PascalTable:
    """Integer coefficient table C[k, m] of the eigenvalue polynomials,
    C_kn = sum_p (-1)^(p-1) C(k-1, p-1) C(N-k, n-p); row 1 is binomial."""
    if int(n) != n or n < 1:
        raise ContractError("n must be >= 1")
    n = int(n)
    c = np.empty((n, n), dtype=np.int64)
    for k in range(1, n + 1):
        for m in range(1, n + 1):
            c[k - 1, m - 1] = sum(
                (-1) ** (p - 1) * _comb(k - 1, p - 1) * _comb(n - k, m - p)
                for p in range(1, k + 1)
            )
    c.setflags(write=False)
    return PascalTable(n=n, c=c)


def theta_factored(n: int, tau: float) -> np.ndarray:
    """The eigenvalue branches theta_k(tau) = (1-tau)^(k-1) (1+tau)^(N-k),
    k = 1..N (descending in k for tau in (0, 1)); the factorized form of the
    table polynomials."""
    k = np.arange(1, n + 1)
    return (1.0 - float(tau)) ** (k - 1) * (1.0 + float(tau)) ** (n - k)


def metric_eigenvalues_closed(n: int, tau: float) -> np.ndarray:
    """Closed-form metric spectrum at (n, tau), ascending.

    Evaluates the table polynomials sum_m C[k, m] tau^(m-1) and sorts. At
    tau = 1 all branches but one vanish and the survivor equals 2^(N-1).
    """
    tau = float(tau)
    if not 0.0 <= tau <= 1.0:
        raise DomainError(f"tau={tau} outside [0, 1]")
    return np.sort(pascal_table(n).eigenvalues(tau))


# ---------------------------------------------------------------------------
# anisotropy and its minimization over the spectral family
# ---------------------------------------------------------------------------

def anisotropy(sample: MetricSample) -> float:
    """Condition number theta_max/theta_min of a positive metric sample.

    Equals ((1+tau)/(1-tau))^(N-1) along the minimal-anisotropy family.
    """
    eigs = sample.eigenvalues
    if eigs[0] <= 0.0:
        raise PositivityError(
            f"metric is not positive definite (min eigenvalue {eigs[0]:.3e})"
        )
    return float(eigs[-1] / eigs[0])


def minimize_anisotropy(
    n: int,
    tau: float,
    max_evaluations: int = 40000,
) -> tuple[np.ndarray, MetricSample]:
    """Minimize the condition number over the kappa weights (sum kappa = 1).

    Oracle-scale only (2 <= n <= 5, 0 < tau <= 0.9): an independent check
    that pointwise condition-number minimization over the full spectral
    family lands on the minimal-anisotropy metric. Returns the optimal
    weights and the corresponding sample.
    """
    if not 2 <= n <= 5:
        raise ContractError("minimize_anisotropy is an oracle for 2 <= n <= 5")
    tau = float(tau)
    if not 0.0 < tau <= 0.9:
        raise ContractError("minimize_anisotropy requires 0 < tau <= 0.9")

    system = model.biorthogonal_system(n, tau)
    ketkets = system.ketkets

    def sample_for(kap: np.ndarray) -> MetricSample:
        theta = (ketkets * kap) @ ketkets.T
        return MetricSample(
            n=n, tau=tau, theta=theta, eigenvalues=np.linalg.eigvalsh(theta)
        )

    def kappa_of(x: np.ndarray) -> np.ndarray:
        kap = np.exp(np.concatenate(([0.0], x)))
        return kap / kap.sum()

    def objective(x: np.ndarray) -> float:
        eigs = sample_for(kappa_of(x)).eigenvalues
        if eigs[0] <= 0.0:
            return math.inf
        return math.log(eigs[-1]) - math.log(eigs[0])

    result = _scipy_minimize(
        objective,
        np.zeros(n - 1),
        method="Nelder-Mead",
        options=dict(
            xatol=1e-11, fatol=1e-13,
            maxiter=max_evaluations, maxfev=max_evaluations,
        ),
    )
    kappa = kappa_of(result.x)
    if not result.success:
        raise ConvergenceError(
            f"anisotropy minimization did not converge within {max_evaluations} "
            f"evaluations (best condition number {math.exp(result.fun):.6g})",
            best_kappa=kappa,
            best_value=float(math.exp(result.fun)),
        )
    return kappa, sample_for(kappa)


def compatibility_residual(h: np.ndarray, theta: np.ndarray) -> float:
    """Relative max-norm of the intertwining defect H^T Theta - Theta H."""
    defect = densecore.max_abs(h.T @ theta - theta @ h)
    return defect / max(densecore.max_abs(theta), 1e-300)
