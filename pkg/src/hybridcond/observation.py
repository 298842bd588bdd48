"""Observation operators, observation-error covariances, and K = H^T R^-1 H.

Four operator variants on an n-point grid, p observations each:

  1 "first_p"      observe grid points 1..p
  2 "every_nth"    observe every (n/p)-th point (requires p | n)
  3 "five_point"   each observation is the mean of five consecutive points
                   centred on every (n/p)-th point, wrapping around the
                   circle (requires p | n)
  4 "random"       p distinct points drawn by a seeded partial Fisher-Yates

Grid indices are 0-based internally; the strided variants place their
centres at columns (n/p)*k - 1 for k = 1..p, which reproduces the natural
1-based placement (n/p, 2n/p, ..., n).

The multi-time setup generalizes to K = sum_i (H_i M_i)^T R_i^-1 (H_i M_i)
with linear propagators M_i supplied by the caller; the single-time case
(N = 0) is K = H0^T R0^-1 H0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    IncompatibleObservationCount,
    NonPositiveVariance,
    TooManyObservations,
)
from .util import rng_from_seed, symmetrize

VARIANT_NAMES = {1: "first_p", 2: "every_nth", 3: "five_point", 4: "random"}


@dataclass(frozen=True, eq=False)
class ObservationOperator:
    """Linear observation operator H (p x n) with its construction record."""

    variant: int
    matrix: np.ndarray
    p: int
    seed: int | None = None

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    @property
    def variant_name(self) -> str:
        return VARIANT_NAMES[self.variant]


@dataclass(frozen=True, eq=False)
class ObservationSetup:
    """Per-time (H_i, R_i) pairs with optional linear propagators M_{i,0}.

    propagators[i] maps the initial state to time i; None means identity for
    every time.  sigma2_R is recorded when every R_i is sigma2 * I.
    """

    operators: tuple[tuple[np.ndarray, np.ndarray], ...]
    propagators: tuple[np.ndarray, ...] | None = None
    sigma2_R: float | None = None

    def __post_init__(self) -> None:
        if not self.operators:
            raise DimensionMismatch("setup needs at least one (H, R) pair")
        n = self.operators[0][0].shape[1]
        for i, (H, R) in enumerate(self.operators):
            if H.ndim != 2 or H.shape[1] != n:
                raise DimensionMismatch(f"H_{i} has shape {H.shape}, expected (*, {n})")
            if R.shape != (H.shape[0], H.shape[0]):
                raise DimensionMismatch(f"R_{i} has shape {R.shape}, expected square of p={H.shape[0]}")
        if self.propagators is not None:
            if len(self.propagators) != len(self.operators):
                raise DimensionMismatch("need one propagator per time index")
            for i, M in enumerate(self.propagators):
                if M.shape != (n, n):
                    raise DimensionMismatch(f"M_{i} has shape {M.shape}, expected ({n}, {n})")

    @property
    def n(self) -> int:
        return self.operators[0][0].shape[1]

    @property
    def N(self) -> int:
        """Last time index; N = 0 is the single-time case."""
        return len(self.operators) - 1


def build_H(variant: int, n: int, p: int, seed: int | None = None) -> ObservationOperator:
    """Build one of the four observation operator variants."""
    if variant not in VARIANT_NAMES:
        raise ValueError(f"unknown observation variant {variant!r}; expected 1-4")
    if p < 1:
        raise ValueError(f"need at least one observation, got p={p}")
    if p > n:
        raise TooManyObservations(f"p={p} exceeds n={n}")

    H = np.zeros((p, n))
    if variant == 1:
        H[np.arange(p), np.arange(p)] = 1.0
    elif variant in (2, 3):
        if n % p != 0:
            raise IncompatibleObservationCount(
                f"variant {variant} needs p | n, got n={n}, p={p}"
            )
        if variant == 3 and n < 5:
            raise IncompatibleObservationCount(
                f"variant 3 needs n >= 5 distinct wrap-around columns, got n={n}"
            )
        stride = n // p
        centres = stride * (np.arange(p) + 1) - 1  # 0-based columns n/p, 2n/p, ...
        if variant == 2:
            H[np.arange(p), centres] = 1.0
        else:
            for row, c in enumerate(centres):
                for off in range(-2, 3):
                    H[row, (c + off) % n] += 0.2
    else:
        gen = rng_from_seed(0 if seed is None else seed)
        cols = _partial_fisher_yates(n, p, gen)
        H[np.arange(p), cols] = 1.0
    return ObservationOperator(variant, H, p, seed if variant == 4 else None)


def _partial_fisher_yates(n: int, p: int, gen: np.random.Generator) -> np.ndarray:
    """First p entries of a Fisher-Yates shuffle of range(n): p distinct draws."""
    idx = np.arange(n)
    for i in range(p):
        j = i + int(gen.integers(0, n - i))
        idx[i], idx[j] = idx[j], idx[i]
    return idx[:p]


def build_R(p: int, sigma2_R: float) -> np.ndarray:
    """Observation-error covariance R = sigma2_R * I_p."""
    if sigma2_R <= 0:
        raise NonPositiveVariance(f"sigma2_R must be positive, got {sigma2_R}")
    return sigma2_R * np.eye(p)


def single_time_setup(H: ObservationOperator, sigma2_R: float) -> ObservationSetup:
    """The N = 0 setup used throughout the reproduction experiments."""
    return ObservationSetup(
        operators=((H.matrix, build_R(H.p, sigma2_R)),),
        propagators=None,
        sigma2_R=sigma2_R,
    )


def build_K(setup: ObservationSetup) -> np.ndarray:
    """Observation information matrix K = sum_i (H_i M_i)^T R_i^-1 (H_i M_i).

    Symmetric PSD; rank at most min(n, total observation count).
    """
    n = setup.n
    K = np.zeros((n, n))
    for i, (H, R) in enumerate(setup.operators):
        G = H if setup.propagators is None else H @ setup.propagators[i]
        K += G.T @ np.linalg.solve(R, G)
    return symmetrize(K)
