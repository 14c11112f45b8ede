"""Exactly solvable N-level PT-symmetric models: Hamiltonians, Hilbert-space
metrics, Dyson factorizations and non-Hermitian-frame time evolution up to
the exceptional-point collapse at tau = 1."""

__version__ = "0.1.0"

from .densecore import finite_diff, inverse, lstsq, max_abs, nullspace, sym_eig
from .errors import (
    AmbiguityError,
    ContractError,
    ConvergenceError,
    DegeneracyError,
    DomainError,
    InstabilityError,
    NotTabulatedError,
    PositivityError,
    PtqmError,
    SingularMatrixError,
)
from .evolution import (
    EvolutionConfig,
    EvolutionTrajectory,
    Frame,
    HorizonReport,
    evolve,
    frame_transport,
    horizon_approach_report,
)
from .maps import (
    CoriolisTerm,
    DysonFactorization,
    Generator,
    coriolis_numeric,
    coriolis_spectral,
    dyson_hamiltonian,
    factorize,
    generator,
)
from .metric import (
    CoefficientArray,
    MetricPolynomial,
    MetricSample,
    N2FamilyPoint,
    PascalTable,
    anisotropy,
    assemble_metric,
    coefficient_array,
    compatibility_residual,
    metric_eigenvalues_closed,
    metric_n2_alpha,
    metric_n2_hyperbolic,
    metric_n3_gfamily,
    minimal_metric,
    minimize_anisotropy,
    pascal_table,
    positivity_boundary_n3,
    solve_metric_polynomial,
    spectral_metric,
    theta_factored,
)
from .model import (
    BiorthogonalSystem,
    EnergySpectrum,
    ModelInstance,
    biorthogonal_system,
    build_hamiltonian,
    defectiveness_gauge,
    energies,
    energies_charpoly,
    model_instance,
    pseudo_hermiticity_residual,
)

__all__ = [
    "__version__",
    # errors
    "PtqmError", "ContractError", "DomainError", "DegeneracyError",
    "SingularMatrixError", "PositivityError", "NotTabulatedError",
    "AmbiguityError", "ConvergenceError", "InstabilityError",
    # kernel
    "sym_eig", "nullspace", "lstsq", "inverse", "finite_diff", "max_abs",
    # model
    "ModelInstance", "EnergySpectrum", "BiorthogonalSystem",
    "model_instance", "build_hamiltonian", "energies", "energies_charpoly",
    "biorthogonal_system", "pseudo_hermiticity_residual", "defectiveness_gauge",
    # metric
    "MetricSample", "MetricPolynomial", "CoefficientArray", "PascalTable",
    "N2FamilyPoint", "metric_n2_alpha", "metric_n2_hyperbolic",
    "metric_n3_gfamily", "positivity_boundary_n3", "coefficient_array",
    "solve_metric_polynomial", "assemble_metric", "minimal_metric",
    "spectral_metric", "pascal_table", "metric_eigenvalues_closed",
    "theta_factored", "anisotropy", "minimize_anisotropy",
    "compatibility_residual",
    # maps
    "DysonFactorization", "CoriolisTerm", "Generator",
    "factorize", "coriolis_spectral", "coriolis_numeric", "generator",
    "dyson_hamiltonian",
    # evolution
    "Frame", "EvolutionConfig", "EvolutionTrajectory", "HorizonReport",
    "evolve", "frame_transport", "horizon_approach_report",
]
