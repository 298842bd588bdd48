"""Conjugate gradient solver with iteration counting for S x = b studies.

The solver is a plain dense CG (no restarts, no internal preconditioner:
the control-variable transform enters by assembling S_P instead).  The
stopping rule is the relative Euclidean residual ||b - S x_k|| / ||b||,
recorded at every iterate so convergence histories can be plotted.

Right-hand sides follow the increment formulation

    b = B^-1 (x_b - x_0) - H0^T d,

with the random vectors x_b - x_0 and the innovation d drawn once per trial
(fixed seed) and reused across the whole beta sweep.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covariance import CovarianceMatrix
from .errors import DimensionMismatch, IndefiniteDetected
from .hessian import HessianMatrix, inverse_spd
from .observation import ObservationOperator
from .util import rng_from_seed

DEFAULT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class CgResult:
    """Outcome of one CG run."""

    solution: np.ndarray
    iterations: int
    residual_history: list[float]
    converged: bool
    tolerance: float


@dataclass(frozen=True, eq=False)
class RhsSpec:
    """Random vectors defining the right-hand side; fixed per trial."""

    x_diff: np.ndarray
    d: np.ndarray
    seed: int


def make_rhs_spec(n: int, p: int, seed: int) -> RhsSpec:
    """Draw x_b - x_0 (length n) and the innovation d (length p) i.i.d. N(0,1)."""
    gen = rng_from_seed(seed)
    x_diff = gen.standard_normal(n)
    d = gen.standard_normal(p)
    return RhsSpec(x_diff, d, seed)


def build_rhs(B: CovarianceMatrix, H0: ObservationOperator, spec: RhsSpec) -> np.ndarray:
    """b = B^-1 (x_b - x_0) - H0^T d."""
    if spec.x_diff.shape != (B.n,):
        raise DimensionMismatch(f"x_diff has shape {spec.x_diff.shape}, expected ({B.n},)")
    if spec.d.shape != (H0.p,):
        raise DimensionMismatch(f"d has shape {spec.d.shape}, expected ({H0.p},)")
    return inverse_spd(B.data) @ spec.x_diff - H0.matrix.T @ spec.d


def cg_solve(
    S: HessianMatrix | np.ndarray,
    b: np.ndarray,
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
    record_iterates: bool = False,
) -> CgResult | tuple[CgResult, list[np.ndarray]]:
    """Solve S x = b by conjugate gradients from x0 = 0.

    Stops at the first iterate with relative residual <= tol, or after
    max_iter steps (default 5 * dimension) with converged=False.  Raises
    IndefiniteDetected if a search direction has non-positive curvature.
    With record_iterates=True also returns the list of iterates x_0..x_K
    (testing hook for the energy-norm decay property).
    """
    A = S.data if isinstance(S, HessianMatrix) else np.asarray(S, dtype=float)
    n = A.shape[0]
    if b.shape != (n,):
        raise DimensionMismatch(f"b has shape {b.shape}, expected ({n},)")
    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        raise ValueError("right-hand side is zero; nothing to solve")
    if max_iter is None:
        max_iter = 5 * n

    x = np.zeros(n)
    r = b.copy()
    p = r.copy()
    rs = float(r @ r)
    history = [np.sqrt(rs) / b_norm]
    iterates = [x.copy()] if record_iterates else None
    converged = history[-1] <= tol
    k = 0
    while not converged and k < max_iter:
        Ap = A @ p
        curvature = float(p @ Ap)
        if curvature <= 0.0:
            raise IndefiniteDetected(
                f"non-positive curvature {curvature:.3e} at iteration {k}"
            )
        alpha = rs / curvature
        x = x + alpha * p
        r = r - alpha * Ap
        rs_new = float(r @ r)
        k += 1
        history.append(np.sqrt(rs_new) / b_norm)
        if iterates is not None:
            iterates.append(x.copy())
        converged = history[-1] <= tol
        p = r + (rs_new / rs) * p
        rs = rs_new
    result = CgResult(x, k, history, converged, tol)
    return (result, iterates) if record_iterates else result
