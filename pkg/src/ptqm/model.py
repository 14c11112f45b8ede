"""The exactly solvable N-level family H(tau) = D + tau*A.

D is diagonal with the equidistant levels 2n - N - 1 (n = 1..N) and A is the
antisymmetric tridiagonal coupling with magnitudes sqrt(n(N-n)). As tau grows
from 0 to 1 the real spectrum contracts like sqrt(1 - tau^2) and the matrix
degenerates, at tau = 1, into an N-fold Jordan block: eigenvalues and
eigenvectors coalesce and the eigenbasis disappears.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .densecore import fix_signs, max_abs
from .errors import ContractError, DegeneracyError, DomainError

#: relative size above which residual imaginary parts of an eigensolve are
#: treated as a sign of numerical defectiveness rather than roundoff
_IMAG_TOL = 1e-8


@dataclass(frozen=True)
class ModelInstance:
    """One member of the family: dimension, time, and the split H = D + tau*A."""

    n: int
    tau: float
    d: np.ndarray
    a: np.ndarray

    @property
    def h(self) -> np.ndarray:
        return self.d + self.tau * self.a


@dataclass(frozen=True)
class EnergySpectrum:
    """Closed-form instantaneous levels, ascending; equidistant and symmetric
    about zero for every tau in [0, 1]."""

    levels: np.ndarray
    tau: float


@dataclass(frozen=True)
class BiorthogonalSystem:
    """Right eigenvectors of H, eigenvectors of H^T ("ketkets"), and their
    mutual pairing.

    Columns are unit-normalized and sign-fixed, ordered by ascending
    eigenvalue; `pairing[n]` holds ketket_n . right_n (the off-diagonal
    pairings vanish). The diagonal pairing decays toward zero as tau -> 1,
    which is how the approach to the defective endpoint shows up here.
    """

    rights: np.ndarray
    ketkets: np.ndarray
    pairing: np.ndarray


def _check_dimension(n: int) -> int:
    if int(n) != n or n < 2:
        raise ContractError("n must be >= 2")
    return int(n)


def coupling_magnitudes(n: int) -> np.ndarray:
    """The N-1 off-diagonal magnitudes sqrt(k(N-k)), k = 1..N-1."""
    k = np.arange(1, n)
    return np.sqrt(k * (n - k)).astype(float)


def model_instance(n: int, tau: float) -> ModelInstance:
    """Construct the split H = D + tau*A for dimension n at time tau.

    Values of tau outside [0, 1] are permitted for exploratory scans but
    flagged with a warning; the model is only physical inside the window.
    """
    n = _check_dimension(n)
    tau = float(tau)
    if not math.isfinite(tau):
        raise ContractError("tau must be finite")
    if tau < 0.0 or tau > 1.0:
        warnings.warn(
            f"tau={tau} is outside the physical window [0, 1]",
            stacklevel=2,
        )
    d = np.diag(2.0 * np.arange(1, n + 1) - n - 1.0)
    a = np.zeros((n, n))
    mags = coupling_magnitudes(n)
    for k in range(n - 1):
        a[k, k + 1] = mags[k]
        a[k + 1, k] = -mags[k]
    d.setflags(write=False)
    a.setflags(write=False)
    return ModelInstance(n=n, tau=tau, d=d, a=a)


def build_hamiltonian(n: int, tau: float) -> np.ndarray:
    """The N x N matrix H(tau) = D + tau*A."""
    return model_instance(n, tau).h


def energies(n: int, tau: float) -> EnergySpectrum:
    """Closed-form levels E_n(tau) = (2n - N - 1) * sqrt(1 - tau^2), ascending.

    Raises DomainError outside [0, 1]; past tau = 1 the spectrum turns
    complex and the model stops being physical.
    """
    n = _check_dimension(n)
    tau = float(tau)
    if tau > 1.0:
        raise DomainError(
            f"tau={tau} > 1 lies in the post-catastrophic regime (complex spectrum)"
        )
    if tau < 0.0:
        raise DomainError(f"tau={tau} < 0 is outside the physical window")
    scale = math.sqrt(1.0 - tau * tau)
    levels = (2.0 * np.arange(1, n + 1) - n - 1.0) * scale
    levels.setflags(write=False)
    return EnergySpectrum(levels=levels, tau=tau)


def energies_charpoly(n: int, tau: float, precision_bits: int = 45) -> np.ndarray:
    """Eigenvalues of H(tau) by exact-rational bisection, ascending.

    Independent cross-check path for the closed form. The characteristic
    polynomial of the tridiagonal H involves the sub/super-diagonal entries
    only through their products -tau^2 * k * (N - k), which are exact
    rationals for any float tau, so det(H - lam*I) can be evaluated without
    rounding and each root isolated to 2^-precision_bits. This sidesteps the
    eigenvalue condition number of the non-normal H, which grows past 1e8
    near the tau = 1 degeneracy and caps plain double-precision eigensolvers
    around 1e-8 there.
    """
    n = _check_dimension(n)
    t2 = Fraction(float(tau)) ** 2
    diag = [2 * k - n - 1 for k in range(1, n + 1)]
    offprod = [-(t2 * k * (n - k)) for k in range(1, n)]

    def charpoly(lam: Fraction) -> Fraction:
        pm2, pm1 = Fraction(1), diag[0] - lam
        for k in range(2, n + 1):
            pm2, pm1 = pm1, (diag[k - 1] - lam) * pm1 - offprod[k - 2] * pm2
        return pm1

    guesses = np.sort(np.linalg.eigvals(build_hamiltonian(n, tau)).real)
    half_window = Fraction(1, 2**18)
    tol = Fraction(1, 2**precision_bits)
    roots = []
    for g in guesses:
        lo = Fraction(float(g)) - half_window
        hi = Fraction(float(g)) + half_window
        flo, fhi = charpoly(lo), charpoly(hi)
        if flo == 0:
            roots.append(float(lo))
            continue
        if fhi == 0:
            roots.append(float(hi))
            continue
        if (flo < 0) == (fhi < 0):
            raise ArithmeticError(
                f"failed to bracket an eigenvalue of H({n}, {tau}) near {g}"
            )
        while hi - lo > tol:
            mid = (lo + hi) / 2
            fm = charpoly(mid)
            if fm == 0:
                lo = hi = mid
                break
            if (fm < 0) == (flo < 0):
                lo, flo = mid, fm
            else:
                hi = mid
        roots.append(float((lo + hi) / 2))
    return np.array(roots)


def _sorted_real_eig(m: np.ndarray, what: str) -> tuple[np.ndarray, np.ndarray]:
    lam, vec = np.linalg.eig(m)
    scale = max(max_abs(m), 1.0)
    if np.abs(lam.imag).max() > _IMAG_TOL * scale:
        raise DegeneracyError(
            f"{what} has numerically complex eigenvalues; "
            "too close to the tau = 1 degeneracy"
        )
    order = np.argsort(lam.real)
    vec = vec[:, order].real
    vec /= np.linalg.norm(vec, axis=0)
    return lam.real[order], fix_signs(vec)


def biorthogonal_system(n: int, tau: float) -> BiorthogonalSystem:
    """Right and conjugate ("ketket") eigenvectors of H(tau), paired by level.

    Requires 0 <= tau < 1 strictly: at tau = 1 the eigenvectors parallelize
    and the matrix ceases to be diagonalizable.
    """
    n = _check_dimension(n)
    tau = float(tau)
    if tau < 0.0:
        raise DomainError(f"tau={tau} < 0 is outside the physical window")
    if tau >= 1.0:
        raise DegeneracyError(
            "tau = 1 is the defective endpoint; no eigenbasis exists there"
        )
    h = build_hamiltonian(n, tau)
    _, rights = _sorted_real_eig(h, f"H({n}, {tau})")
    _, ketkets = _sorted_real_eig(h.T, f"H^T({n}, {tau})")
    pairing = np.einsum("ij,ij->j", ketkets, rights)
    return BiorthogonalSystem(rights=rights, ketkets=ketkets, pairing=pairing)


def pseudo_hermiticity_residual(n: int, tau: float) -> float:
    """Max-norm of P H P - H^T with the alternating parity P = diag((-1)^(n+1)).

    Identically zero for this family: flipping the sign of every other basis
    vector transposes the antisymmetric coupling while fixing the diagonal.
    """
    h = build_hamiltonian(n, tau)
    p = np.diag((-1.0) ** np.arange(n))
    return max_abs(p @ h @ p - h.T)


def defectiveness_gauge(n: int, tau: float) -> float:
    """Smallest singular value of the (unit-column) right-eigenvector matrix.

    Equal to 1 for an orthonormal eigenbasis and 0 at the Jordan-block
    endpoint; records how close the model is to losing diagonalizability.
    """
    n = _check_dimension(n)
    tau = float(tau)
    if tau < 0.0 or tau > 1.0:
        raise DomainError(f"tau={tau} is outside [0, 1]")
    _, vec = np.linalg.eig(build_hamiltonian(n, tau))
    vec = vec / np.linalg.norm(vec, axis=0)
    return float(np.linalg.svd(vec, compute_uv=False)[-1])
