"""Exception types shared across the package."""

from __future__ import annotations


class PtqmError(Exception):
    """Base class for all package-specific errors."""


class ContractError(PtqmError, ValueError):
    """An argument violates a documented precondition (shape, range, sign)."""


class DomainError(PtqmError, ValueError):
    """A time parameter lies outside the physical window of the model."""


class DegeneracyError(DomainError):
    """The Hamiltonian is defective (or numerically indistinguishable from
    defective) and has no eigenbasis; raised at and near tau = 1."""


class SingularMatrixError(PtqmError, ArithmeticError):
    """A matrix that must be inverted is singular to working tolerance.

    Carries the offending smallest singular value.
    """

    def __init__(self, message: str, smallest_singular_value: float):
        super().__init__(message)
        self.smallest_singular_value = float(smallest_singular_value)


class PositivityError(PtqmError, ValueError):
    """A candidate metric (or metric parameter) fails positive definiteness."""


class NotTabulatedError(PtqmError, LookupError):
    """No closed-form coefficient array is tabulated for the requested
    (dimension, band) pair; the generic linear solver covers those cases."""


class AmbiguityError(PtqmError, RuntimeError):
    """The metric-coefficient linear system has a nontrivial nullspace.

    Carries the detected nullspace dimension.
    """

    def __init__(self, message: str, nullspace_dimension: int):
        super().__init__(message)
        self.nullspace_dimension = int(nullspace_dimension)


class ConvergenceError(PtqmError, RuntimeError):
    """An iterative optimization exhausted its budget; carries the best iterate."""

    def __init__(self, message: str, best_kappa=None, best_value=None):
        super().__init__(message)
        self.best_kappa = best_kappa
        self.best_value = best_value


class InstabilityError(PtqmError, RuntimeError):
    """A fixed-step integration drifted beyond tolerance; use a smaller step."""
