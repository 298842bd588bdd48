"""Small shared helpers: seeded RNG construction and symmetry utilities."""

from __future__ import annotations

import numpy as np

from .errors import NotSymmetric

PACKAGE_VERSION = "0.1.0"

#: Absolute tolerance for entrywise symmetry checks.
SYMMETRY_ATOL = 1e-12

#: Eigenvalues in [-PSD_RTOL * lam_max, 0] are treated as zero.
PSD_RTOL = 1e-10


def rng_from_seed(seed: int) -> np.random.Generator:
    """One PCG64 stream per draw; never share streams between draws."""
    return np.random.Generator(np.random.PCG64(seed))


def symmetrize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def require_symmetric(a: np.ndarray, atol: float = SYMMETRY_ATOL, name: str = "matrix") -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"{name} is not square: shape {a.shape}")
    # scale-aware: atol is meant for O(1) entries
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    if not np.allclose(a, a.T, rtol=0.0, atol=atol * scale):
        raise NotSymmetric(f"{name} is not symmetric within atol={atol}")


def rel_diff(a: float, b: float) -> float:
    """Relative difference with a graceful zero denominator."""
    denom = max(abs(a), abs(b), 1e-300)
    return abs(a - b) / denom
