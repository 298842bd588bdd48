"""Hessian assembly for the hybrid variational cost function.

Unpreconditioned (state space, n x n):

    S = B^-1 + K,   B = (1-beta) B0 + beta P_f,   K = H^T R^-1 H.

B is inverted through its symmetric eigendecomposition rather than a
triangular factorization: the sweeps deliberately probe the beta -> 1 regime
where B approaches singularity, and the eigenvalue ratio is the natural
detector for it.  When lam_min(B)/lam_max(B) < SINGULARITY_RTOL the assembly
raises NearSingularBackground and the caller records a divergence row
instead of a number.

Preconditioned (control space, (n+m) x (n+m)) via the control-variable
transform U_h = [sqrt(1-beta) U, sqrt(beta) X_f] with U = B0^{1/2}:

    S_P = I + U_h^T K U_h,

well defined for every beta in [0, 1] including the endpoint.  Its smallest
eigenvalue is exactly 1 because U_h^T K U_h has rank at most n < n+m.

split_A1_A2 exposes the block decomposition of U_h^T K U_h into its diagonal
part A1 = blockdiag((1-beta) U^T K U, beta X_f^T K X_f) and off-diagonal
part A2 (the sqrt(beta - beta^2) cross blocks), which is where the max-term
switch in the preconditioned upper bound comes from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .covariance import CovarianceMatrix
from .errors import DimensionMismatch, NearSingularBackground, WeightOutOfRange
from .util import symmetrize

#: B is declared numerically singular when lam_min/lam_max drops below this.
SINGULARITY_RTOL = 1e-14


@dataclass(frozen=True, eq=False)
class HessianMatrix:
    """Assembled Hessian with its weight and input provenance."""

    data: np.ndarray
    preconditioned: bool
    beta: float
    provenance: Mapping[str, object] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True, eq=False)
class CvtFactor:
    """Control-variable transform factor U_h = [sqrt(1-beta) U, sqrt(beta) X_f]."""

    data: np.ndarray
    beta: float
    U: np.ndarray
    X_f: np.ndarray

    @property
    def n(self) -> int:
        return self.U.shape[0]

    @property
    def m(self) -> int:
        return self.X_f.shape[1]


def inverse_spd(B: np.ndarray, *, context: str = "B") -> np.ndarray:
    """Inverse of an SPD matrix through its eigendecomposition.

    Raises NearSingularBackground when the eigenvalue ratio signals the
    divergence regime.
    """
    w, v = np.linalg.eigh(symmetrize(B))
    if w[-1] <= 0 or w[0] <= SINGULARITY_RTOL * w[-1]:
        raise NearSingularBackground(
            f"{context} is numerically singular: lam_min/lam_max = "
            f"{w[0] / w[-1] if w[-1] > 0 else float('nan'):.3e}"
        )
    return symmetrize((v / w) @ v.T)


def assemble_unpreconditioned(B: CovarianceMatrix, K: np.ndarray) -> HessianMatrix:
    """S = B^-1 + K, symmetrized after assembly."""
    if B.data.shape != K.shape:
        raise DimensionMismatch(f"B is {B.data.shape}, K is {K.shape}")
    beta = float(B.params.get("beta", 0.0))
    S = symmetrize(inverse_spd(B.data) + K)
    return HessianMatrix(S, preconditioned=False, beta=beta, provenance={"B_kind": B.kind})


def assemble_cvt_factor(U: np.ndarray, X_f: np.ndarray, beta: float) -> CvtFactor:
    """Column concatenation U_h = [sqrt(1-beta) U, sqrt(beta) X_f]."""
    if not 0.0 <= beta <= 1.0:
        raise WeightOutOfRange(f"beta must lie in [0, 1], got {beta}")
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise DimensionMismatch(f"U must be square n x n, got {U.shape}")
    if X_f.ndim != 2 or X_f.shape[0] != U.shape[0]:
        raise DimensionMismatch(f"X_f must be n x m with n={U.shape[0]}, got {X_f.shape}")
    data = np.hstack([math.sqrt(1.0 - beta) * U, math.sqrt(beta) * X_f])
    return CvtFactor(data, beta, U, X_f)


def assemble_preconditioned(Uh: CvtFactor, K: np.ndarray) -> HessianMatrix:
    """S_P = I_{n+m} + U_h^T K U_h, symmetrized after assembly."""
    if K.shape != (Uh.n, Uh.n):
        raise DimensionMismatch(f"K is {K.shape}, expected ({Uh.n}, {Uh.n})")
    core = Uh.data.T @ K @ Uh.data
    S = symmetrize(np.eye(Uh.n + Uh.m) + core)
    return HessianMatrix(S, preconditioned=True, beta=Uh.beta, provenance={"m": Uh.m})


def split_A1_A2(Uh: CvtFactor, K: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Block-diagonal / off-diagonal split of U_h^T K U_h.

    A1 = blockdiag((1-beta) U^T K U, beta X_f^T K X_f)
    A2 = off-diagonal blocks sqrt(beta - beta^2) U^T K X_f and transpose
    with A1 + A2 == U_h^T K U_h.
    """
    if K.shape != (Uh.n, Uh.n):
        raise DimensionMismatch(f"K is {K.shape}, expected ({Uh.n}, {Uh.n})")
    n, m = Uh.n, Uh.m
    beta = Uh.beta
    KU = K @ Uh.U
    KX = K @ Uh.X_f
    A1 = np.zeros((n + m, n + m))
    A1[:n, :n] = (1.0 - beta) * symmetrize(Uh.U.T @ KU)
    A1[n:, n:] = beta * symmetrize(Uh.X_f.T @ KX)
    cross = math.sqrt(max(beta - beta * beta, 0.0)) * (Uh.U.T @ KX)
    A2 = np.zeros((n + m, n + m))
    A2[:n, n:] = cross
    A2[n:, :n] = cross.T
    return A1, A2
