"""Randomized bound-sandwich validation over small problem instances.

Each trial draws a full problem (grid size, length scales, variances,
ensemble size, observation count and variant) in the regime the analysis
targets — length scales of a few grid spacings and a non-vanishing observed
fraction — builds everything exactly as the sweeps do, and checks

    lower <= kappa_exact <= upper

for every applicable catalogue entry: lemma2 (on kappa(B)), thm3, thm4 and
coro2 (unpreconditioned Hessian, beta < 1), thm5 and thm6 (preconditioned
Hessian, beta in [0, 1]).  Violations are returned as strings; an empty
list is a pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import (
    bounds_coro2,
    bounds_kappa_B,
    bounds_thm3,
    bounds_thm4,
    bounds_thm5,
    bounds_thm6,
)
from .covariance import (
    CovarianceMatrix,
    GridGeometry,
    build_soar,
    build_static_B,
    ensemble_covariance,
    hybrid_B,
    sample_ensemble_factor,
    sym_sqrt,
)
from .experiments import SELECTION_VARIANTS, sandwich_ok
from .hessian import assemble_cvt_factor, assemble_preconditioned, assemble_unpreconditioned
from .observation import build_H, build_K, single_time_setup
from .util import rng_from_seed


@dataclass(frozen=True)
class TrialConfig:
    n: int
    L0: float
    Lens: float
    sigma2_B0: float
    sigma2_Pf: float
    sigma2_R: float
    m: int
    p: int
    H_variant: int
    beta_unprec: float
    beta_prec: float
    ensemble_seed: int
    placement_seed: int

    def describe(self) -> str:
        return (
            f"n={self.n} L0={self.L0:.3f} Lens={self.Lens:.3f} "
            f"s2B0={self.sigma2_B0:.3f} s2Pf={self.sigma2_Pf:.3f} s2R={self.sigma2_R:.3f} "
            f"m={self.m} p={self.p} H={self.H_variant} "
            f"bu={self.beta_unprec:.4f} bp={self.beta_prec:.4f}"
        )


def _divisors_between(n: int, lo: int, hi: int) -> list[int]:
    return [d for d in range(max(2, lo), hi + 1) if n % d == 0]


def draw_trial(gen: np.random.Generator) -> TrialConfig:
    """Draw one randomized configuration (grid-relative length scales)."""
    n = int(gen.integers(24, 61))
    spacing = 2.0 * math.pi / n
    variant = int(gen.integers(1, 5))
    if variant in (2, 3):
        choices = _divisors_between(n, max(2, n // 10), n // 2)
        if not choices:
            variant = 1
            p = int(gen.integers(max(2, n // 10), n // 2 + 1))
        else:
            p = int(gen.choice(choices))
    else:
        p = int(gen.integers(max(2, n // 10), n // 2 + 1))
    beta_prec = float(gen.uniform(0.0, 1.0))
    # hit the endpoints now and then: thm5/thm6 are defined on all of [0, 1]
    snap = gen.uniform()
    if snap < 0.05:
        beta_prec = 0.0
    elif snap < 0.10:
        beta_prec = 1.0
    return TrialConfig(
        n=n,
        L0=float(gen.uniform(2.0, 12.0)) * spacing,
        Lens=float(gen.uniform(2.0, 12.0)) * spacing,
        sigma2_B0=float(gen.uniform(0.25, 4.0)),
        sigma2_Pf=float(gen.uniform(0.25, 4.0)),
        sigma2_R=float(gen.uniform(0.25, 4.0)),
        m=int(gen.integers(max(3, n // 10), max(4, n // 2))),
        p=p,
        H_variant=variant,
        beta_unprec=float(gen.uniform(0.02, 0.95)),
        beta_prec=beta_prec,
        ensemble_seed=int(gen.integers(0, 2**31)),
        placement_seed=int(gen.integers(0, 2**31)),
    )


def check_trial(trial: TrialConfig) -> list[str]:
    """Run every sandwich check for one trial; returns violation strings."""
    geom = GridGeometry(trial.n)
    B0 = build_static_B(geom, trial.L0, trial.sigma2_B0)
    B1 = CovarianceMatrix(
        trial.sigma2_Pf * build_soar(geom, trial.Lens).data, "static", {"L": trial.Lens}
    )
    X = sample_ensemble_factor(B1, trial.m, trial.ensemble_seed)
    Pf = ensemble_covariance(X)
    H = build_H(trial.H_variant, trial.n, trial.p, seed=trial.placement_seed)
    K = build_K(single_time_setup(H, trial.sigma2_R))

    wB0 = np.linalg.eigh(B0.data)[0]  # same driver as the hybrid-B solves
    l1B0, lnB0 = float(wB0[-1]), float(wB0[0])
    l1Pf = float(np.linalg.eigvalsh(Pf.data)[-1])
    l1K = float(np.linalg.eigvalsh(K)[-1])

    violations: list[str] = []

    def record(name: str, kappa: float, report) -> None:
        if not sandwich_ok(kappa, report):
            violations.append(
                f"{name}: kappa={kappa:.6e} outside [{report.lower:.6e}, "
                f"{report.upper:.6e}] ({trial.describe()})"
            )

    # unpreconditioned family at beta < 1
    beta = trial.beta_unprec
    B = hybrid_B(B0, Pf, beta)
    wB = np.linalg.eigvalsh(B.data)
    if wB[0] > 0:
        kappa_B = float(wB[-1] / wB[0])
        record("lemma2", kappa_B, bounds_kappa_B(l1B0, lnB0, l1Pf, beta))
        S = assemble_unpreconditioned(B, K)
        wS = np.linalg.eigvalsh(S.data)
        kappa_S = float(wS[-1] / wS[0])
        record("thm3", kappa_S, bounds_thm3(kappa_B, float(wB[-1]), float(wB[0]), l1K))
        record("thm4", kappa_S, bounds_thm4(l1B0, lnB0, l1Pf, l1K, beta))
        if trial.H_variant in SELECTION_VARIANTS:
            record("coro2", kappa_S, bounds_coro2(l1B0, lnB0, l1Pf, trial.sigma2_R, beta))

    # preconditioned family on [0, 1]
    beta_p = trial.beta_prec
    Uh = assemble_cvt_factor(sym_sqrt(B0), X.data, beta_p)
    SP = assemble_preconditioned(Uh, K)
    wP = np.linalg.eigvalsh(SP.data)
    kappa_P = float(wP[-1] / wP[0])
    record("thm5", kappa_P, bounds_thm5(l1B0, lnB0, l1Pf, l1K, beta_p))
    record("thm6", kappa_P, bounds_thm6(l1B0, l1Pf, l1K, beta_p))
    return violations


def run_sandwich_suite(trials: int = 200, seed: int = 0) -> list[str]:
    """Run `trials` randomized configurations; returns all violations."""
    gen = rng_from_seed(seed)
    violations: list[str] = []
    for k in range(trials):
        trial = draw_trial(gen)
        violations.extend(f"trial {k}: {v}" for v in check_trial(trial))
    return violations
