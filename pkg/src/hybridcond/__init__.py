"""hybridcond: conditioning analysis of hybrid-covariance variational assimilation.

Constructs hybrid background-error covariances B = (1-beta) B0 + beta P_f on
a periodic grid, assembles the unpreconditioned Hessian B^-1 + K and the
CVT-preconditioned Hessian I + U_h^T K U_h, evaluates the full catalogue of
condition-number bounds from component extreme eigenvalues, and runs the
beta sweeps, eigenvalue curves, and conjugate-gradient convergence studies
that produce figure-ready CSV output.
"""

from .bounds import (
    BoundReport,
    SpectralSummary,
    bounds_coro2,
    bounds_kappa_B,
    bounds_lemma1,
    bounds_thm3,
    bounds_thm4,
    bounds_thm5,
    bounds_thm6,
    check_product_inequality,
    check_weyl_inequalities,
    spectral_summary,
    switch_point,
)
from .config import ExperimentConfig, FIGURE_PRESETS, get_preset, load_config
from .covariance import (
    CovarianceMatrix,
    EnsembleFactor,
    GridGeometry,
    build_soar,
    build_static_B,
    ensemble_covariance,
    hybrid_B,
    sample_ensemble_factor,
    sym_sqrt,
)
from .experiments import (
    AssembledProblem,
    SweepRecord,
    assemble_problem,
    cg_sweep,
    run_beta_sweep,
    run_cg_study,
    run_eigen_vs_lengthscale,
    run_figure,
    run_parameter_family,
)
from .hessian import (
    CvtFactor,
    HessianMatrix,
    assemble_cvt_factor,
    assemble_preconditioned,
    assemble_unpreconditioned,
    split_A1_A2,
)
from .observation import (
    ObservationOperator,
    ObservationSetup,
    build_H,
    build_K,
    build_R,
    single_time_setup,
)
from .solver import CgResult, RhsSpec, build_rhs, cg_solve, make_rhs_spec
from .util import PACKAGE_VERSION as __version__
from .validation import run_sandwich_suite

__all__ = [
    "AssembledProblem",
    "BoundReport",
    "CgResult",
    "CovarianceMatrix",
    "CvtFactor",
    "EnsembleFactor",
    "ExperimentConfig",
    "FIGURE_PRESETS",
    "GridGeometry",
    "HessianMatrix",
    "ObservationOperator",
    "ObservationSetup",
    "RhsSpec",
    "SpectralSummary",
    "SweepRecord",
    "__version__",
    "assemble_cvt_factor",
    "assemble_preconditioned",
    "assemble_problem",
    "assemble_unpreconditioned",
    "bounds_coro2",
    "bounds_kappa_B",
    "bounds_lemma1",
    "bounds_thm3",
    "bounds_thm4",
    "bounds_thm5",
    "bounds_thm6",
    "build_H",
    "build_K",
    "build_R",
    "build_rhs",
    "build_soar",
    "build_static_B",
    "cg_solve",
    "cg_sweep",
    "check_product_inequality",
    "check_weyl_inequalities",
    "ensemble_covariance",
    "get_preset",
    "hybrid_B",
    "load_config",
    "make_rhs_spec",
    "run_beta_sweep",
    "run_cg_study",
    "run_eigen_vs_lengthscale",
    "run_figure",
    "run_parameter_family",
    "run_sandwich_suite",
    "sample_ensemble_factor",
    "single_time_setup",
    "spectral_summary",
    "split_A1_A2",
    "switch_point",
    "sym_sqrt",
]
