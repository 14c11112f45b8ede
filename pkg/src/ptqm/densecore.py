"""Dense linear-algebra kernel used by every other module.

Thin, contract-checked wrappers around LAPACK (through numpy) plus the small
helpers the rest of the package needs: sign-fixed symmetric eigenbases,
SVD nullspaces, guarded inversion and central differences. Double precision
throughout, deterministic algorithms only, no domain knowledge.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import ContractError, DomainError, SingularMatrixError

SIGN_TOL = 1e-12


def as_matrix(m) -> np.ndarray:
    """Validate and return `m` as a 2-d float array with finite entries."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ContractError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ContractError("matrix entries must be finite")
    return a


def as_square(m) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {a.shape}")
    return a


def max_abs(m) -> float:
    """Entrywise max norm; the residual norm used throughout the package."""
    a = np.asarray(m)
    return float(np.max(np.abs(a))) if a.size else 0.0


def fix_signs(v: np.ndarray, tol: float = SIGN_TOL) -> np.ndarray:
    """Flip column signs so the first component of magnitude > tol is positive.

    Makes eigenbases (and everything factored from them) deterministic and
    continuous in parameters, which downstream factorizations rely on.
    """
    v = np.array(v, dtype=float, copy=True)
    for j in range(v.shape[1]):
        col = v[:, j]
        big = np.abs(col) > tol
        if big.any() and col[np.argmax(big)] < 0.0:
            v[:, j] = -col
    return v


def sym_eig(m, sym_tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric real matrix.

    Returns (eigenvalues ascending, orthonormal eigenvector columns) with the
    sign convention of `fix_signs`. Raises ContractError if the input is not
    square or not symmetric to `sym_tol` relative.
    """
    a = as_square(m)
    scale = max_abs(a)
    if max_abs(a - a.T) > sym_tol * max(scale, 1.0):
        raise ContractError("matrix is not symmetric to working tolerance")
    w, v = np.linalg.eigh(a)
    return w, fix_signs(v)


def nullspace(a, tol: float) -> np.ndarray:
    """Orthonormal basis (as columns) of {x : a @ x ~ 0}.

    A direction counts as null when its singular value is <= tol * s_max.
    Returns an (ncols, dim) array; dim may be zero.
    """
    if not tol > 0.0:
        raise ContractError("tol must be positive")
    m = as_matrix(a)
    s = np.linalg.svd(m, compute_uv=False)
    _, _, vh = np.linalg.svd(m, full_matrices=True)
    rank = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0.0 else 0
    basis = vh[rank:].T
    return fix_signs(basis) if basis.size else basis


def lstsq(a, b) -> np.ndarray:
    """Minimizer x of ||a @ x - b||, via SVD."""
    m = as_matrix(a)
    rhs = np.asarray(b, dtype=float).ravel()
    if rhs.shape[0] != m.shape[0]:
        raise ContractError(
            f"rhs length {rhs.shape[0]} does not match row count {m.shape[0]}"
        )
    x, _, _, _ = np.linalg.lstsq(m, rhs, rcond=None)
    return x


def inverse(m, cond_limit: float = 1e14) -> np.ndarray:
    """Inverse of a square matrix, guarded against near-singularity.

    Raises SingularMatrixError (carrying the smallest singular value) when the
    condition number exceeds `cond_limit`.
    """
    a = as_square(m)
    s = np.linalg.svd(a, compute_uv=False)
    if s[-1] <= 0.0 or s[0] / s[-1] > cond_limit:
        raise SingularMatrixError(
            f"matrix is singular to tolerance (smallest singular value {s[-1]:.3e})",
            smallest_singular_value=s[-1],
        )
    return np.linalg.inv(a)


def finite_diff(f: Callable[[float], np.ndarray], tau: float, h: float) -> np.ndarray:
    """Central difference (f(tau+h) - f(tau-h)) / (2h); O(h^2) for smooth f.

    Evaluation failures of `f` at tau +- h surface as DomainError.
    """
    if not h > 0.0:
        raise ContractError("step h must be positive")
    try:
        hi = np.asarray(f(tau + h), dtype=float)
        lo = np.asarray(f(tau - h), dtype=float)
    except DomainError:
        raise
    except (SingularMatrixError, ValueError) as exc:
        raise DomainError(f"f is not evaluable at tau +- h = {tau} +- {h}: {exc}") from exc
    return (hi - lo) / (2.0 * h)
