"""Background-error covariance construction on a periodic 1-D grid.

The grid is a uniform discretization of the circle of radius ``r``.  Static
covariances use the second-order auto-regressive (SOAR) correlation family

    D_L(i, j) = (1 + rho_ij) * exp(-rho_ij),
    rho_ij    = (2 r / L) * sin(theta_ij / 2),

where ``theta_ij`` is the shortest angular separation between grid points i
and j, so ``2 r sin(theta/2)`` is the chordal distance.  Note the negative
exponent: a positive exponent would give a diagonal of e and "correlations"
growing with distance, which is not a correlation matrix.  The SOAR family
is positive definite in up to three dimensions, and the chordal embedding of
the circle keeps that property on the grid (up to floating-point noise).

Ensemble covariances are sampled: draw m standard-normal vectors w_k, map
them through the symmetric square root of a generating covariance B1, remove
the ensemble mean, scale by 1/sqrt(m-1).  The resulting P_f = X_f X_f^T is
an unbiased estimator of B1 with rank at most m-1.

The hybrid combination is B = (1-beta) B0 + beta P_f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import (
    DimensionMismatch,
    EnsembleTooLarge,
    EnsembleTooSmall,
    NonPositiveLengthScale,
    NonPositiveVariance,
    NotPositiveSemidefinite,
    WeightOutOfRange,
)
from .util import PSD_RTOL, rng_from_seed, symmetrize

KIND_STATIC = "static"
KIND_ENSEMBLE = "ensemble"
KIND_HYBRID = "hybrid"


@dataclass(frozen=True)
class GridGeometry:
    """Uniform angular grid with n points on a circle of radius r."""

    n: int
    r: float = 1.0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"grid needs at least 2 points, got n={self.n}")
        if self.r <= 0:
            raise ValueError(f"radius must be positive, got r={self.r}")

    @property
    def spacing(self) -> float:
        """Angular spacing theta = 2*pi/n."""
        return 2.0 * math.pi / self.n

    def angular_separations(self) -> np.ndarray:
        """Matrix of shortest angular separations 2*pi*min(|i-j|, n-|i-j|)/n."""
        idx = np.arange(self.n)
        diff = np.abs(idx[:, None] - idx[None, :])
        return 2.0 * math.pi * np.minimum(diff, self.n - diff) / self.n


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Symmetric PSD matrix with a role tag and construction parameters.

    kind is one of "static", "ensemble", "hybrid".  params records the
    originating (L, sigma2, beta, m, seed) as applicable.
    """

    data: np.ndarray
    kind: str
    params: Mapping[str, float] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues (full symmetric eigensolve)."""
        return np.linalg.eigvalsh(self.data)


@dataclass(frozen=True, eq=False)
class EnsembleFactor:
    """Scaled deviation matrix X_f (n x m) with column mean removed.

    P_f = X_f X_f^T.  Each row of X_f sums to zero because the ensemble mean
    was subtracted, which is what caps rank(P_f) at m-1.
    """

    data: np.ndarray
    m: int
    seed: int

    @property
    def n(self) -> int:
        return self.data.shape[0]


def build_soar(geom: GridGeometry, L: float) -> CovarianceMatrix:
    """SOAR correlation matrix D_L on the grid (unit diagonal, PSD).

    Raises NonPositiveLengthScale if L <= 0.
    """
    if L <= 0:
        raise NonPositiveLengthScale(f"length scale must be positive, got L={L}")
    theta = geom.angular_separations()
    rho = (2.0 * geom.r / L) * np.sin(theta / 2.0)
    data = (1.0 + rho) * np.exp(-rho)
    return CovarianceMatrix(symmetrize(data), KIND_STATIC, {"L": L, "sigma2": 1.0})


def build_static_B(geom: GridGeometry, L0: float, sigma2_B0: float) -> CovarianceMatrix:
    """Static background covariance B0 = sigma2_B0 * D_L0 (strictly SPD)."""
    if sigma2_B0 <= 0:
        raise NonPositiveVariance(f"sigma2_B0 must be positive, got {sigma2_B0}")
    corr = build_soar(geom, L0)
    return CovarianceMatrix(sigma2_B0 * corr.data, KIND_STATIC, {"L": L0, "sigma2": sigma2_B0})


def sym_sqrt(A: CovarianceMatrix | np.ndarray) -> np.ndarray:
    """Symmetric PSD square root U with U @ U == A.

    Eigenvalues in [-PSD_RTOL * lam_max, 0] are clamped to zero before the
    square root; anything lower raises NotPositiveSemidefinite.
    """
    mat = A.data if isinstance(A, CovarianceMatrix) else np.asarray(A, dtype=float)
    w, v = np.linalg.eigh(symmetrize(mat))
    lam_max = float(w[-1]) if w.size else 0.0
    floor = -PSD_RTOL * max(lam_max, 0.0)
    if w[0] < floor:
        raise NotPositiveSemidefinite(
            f"smallest eigenvalue {w[0]:.3e} below PSD tolerance {floor:.3e}"
        )
    w = np.clip(w, 0.0, None)
    return symmetrize((v * np.sqrt(w)) @ v.T)


def sample_ensemble_factor(B1: CovarianceMatrix, m: int, seed: int) -> EnsembleFactor:
    """Draw the scaled ensemble deviation matrix X_f from covariance B1.

    Columns are (B1^{1/2} w_k - mean) / sqrt(m-1) with w_k i.i.d. standard
    normal from one dedicated PCG64 stream, so the draw is bitwise
    reproducible for a fixed seed.
    """
    n = B1.n
    if m < 2:
        raise EnsembleTooSmall(f"need at least 2 members, got m={m}")
    if m >= n:
        raise EnsembleTooLarge(f"need m < n for a rank-deficient P_f, got m={m}, n={n}")
    root = sym_sqrt(B1)
    gen = rng_from_seed(seed)
    w = gen.standard_normal((n, m))
    members = root @ w
    deviations = members - members.mean(axis=1, keepdims=True)
    return EnsembleFactor(deviations / math.sqrt(m - 1), m, seed)


def ensemble_covariance(X: EnsembleFactor) -> CovarianceMatrix:
    """Ensemble covariance P_f = X_f X_f^T (rank <= m-1)."""
    data = symmetrize(X.data @ X.data.T)
    return CovarianceMatrix(data, KIND_ENSEMBLE, {"m": X.m, "seed": X.seed})


def hybrid_B(B0: CovarianceMatrix, Pf: CovarianceMatrix, beta: float) -> CovarianceMatrix:
    """Hybrid covariance B = (1-beta) B0 + beta P_f.

    SPD for beta < 1 (given SPD B0); singular at beta = 1.
    """
    if not 0.0 <= beta <= 1.0:
        raise WeightOutOfRange(f"beta must lie in [0, 1], got {beta}")
    if B0.data.shape != Pf.data.shape:
        raise DimensionMismatch(f"B0 is {B0.data.shape}, P_f is {Pf.data.shape}")
    data = (1.0 - beta) * B0.data + beta * Pf.data
    params = {"beta": beta}
    params.update({f"B0_{k}": v for k, v in B0.params.items()})
    params.update({f"Pf_{k}": v for k, v in Pf.params.items()})
    return CovarianceMatrix(symmetrize(data), KIND_HYBRID, params)
