"""Exact condition numbers and the condition-number bound catalogue.

All bound evaluators are pure scalar formulas: they take precomputed extreme
eigenvalues and never touch a matrix, so a full sweep over beta costs
nothing beyond the one-off eigensolves of B0, P_f and K.  The catalogue
labels (lemma1/lemma2/thm3/thm4/coro2/thm5/thm6) refer to the numbered
bound catalogue in this repository's README, which states each formula.

Notation used in the formulas below (all scalars):

    l1B0, lnB0   largest / smallest eigenvalue of the static covariance B0
    l1Pf         largest eigenvalue of the ensemble covariance P_f
                 (its smallest eigenvalue is 0: P_f is rank deficient)
    l1K          largest eigenvalue of K = H^T R^-1 H; l1(K^2) = l1K^2
    l1B, lnB     extreme eigenvalues of the hybrid B
    kappa(X)     l1(X)/ln(X)
    beta         ensemble weight in [0, 1]

Diverging bounds (beta -> 1 for the unpreconditioned family) are reported
as +inf sentinels with the offending denominator recorded in ``terms``,
never as floating-point exceptions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import DegenerateInputs, NotPSD, WeightOutOfRange
from .util import PSD_RTOL, require_symmetric

INF = float("inf")


@dataclass(frozen=True)
class SpectralSummary:
    """Extreme eigenvalues and condition number of a symmetric matrix."""

    lambda_max: float
    lambda_min: float
    kappa: float
    method: str = "full-eigensolve"


@dataclass(frozen=True)
class BoundReport:
    """Lower/upper bound for one catalogue entry, with audit intermediates."""

    theorem: str
    lower: float
    upper: float
    terms: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        # tiny slack: lower/upper may share a value computed two ways
        if not (self.lower <= self.upper * (1.0 + 1e-12) or math.isinf(self.lower)):
            raise ValueError(
                f"{self.theorem}: lower {self.lower} exceeds upper {self.upper}"
            )

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "lower": self.lower,
            "upper": self.upper,
            "terms": dict(self.terms),
        }


def spectral_summary(A: np.ndarray, singular_rtol: float = 0.0) -> SpectralSummary:
    """Extreme eigenvalues by full symmetric eigensolve; kappa = l1/ln.

    kappa is the +inf sentinel when lam_min <= singular_rtol * lam_max.
    The default treats only lam_min <= 0 as singular; pass PSD_RTOL to
    classify rank-deficient PSD inputs (lam_min at rounding level) as
    singular too.  Do not raise the tolerance when summarizing genuinely
    ill-conditioned SPD matrices, whose tiny lam_min is the point.
    """
    require_symmetric(A, name="spectral_summary input")
    w = np.linalg.eigvalsh(A)
    lam_max, lam_min = float(w[-1]), float(w[0])
    floor = singular_rtol * max(lam_max, 0.0)
    kappa = lam_max / lam_min if lam_min > floor and lam_min > 0.0 else INF
    return SpectralSummary(lam_max, lam_min, kappa)


def _check_beta(beta: float) -> None:
    if not 0.0 <= beta <= 1.0:
        raise WeightOutOfRange(f"beta must lie in [0, 1], got {beta}")


def _hybrid_growth(l1B0: float, l1Pf: float, beta: float) -> float:
    """t = beta*l1(Pf) / ((1-beta)*l1(B0)); +inf at beta = 1."""
    if beta >= 1.0:
        return INF if l1Pf > 0 else 0.0
    return beta * l1Pf / ((1.0 - beta) * l1B0)


def bounds_lemma1(l1B0: float, lnB0: float, l1Pf: float, beta: float) -> tuple[BoundReport, BoundReport]:
    """Catalogue lemma1: eigenvalue sandwiches for the hybrid B.

    Returns (bounds on l1(B), bounds on ln(B)):
      max[(1-b) l1B0, b l1Pf + (1-b) lnB0] <= l1(B) <= (1-b) l1B0 + b l1Pf
      (1-b) lnB0 <= ln(B) <= min[(1-b) l1B0, b l1Pf + (1-b) lnB0]
    """
    _check_beta(beta)
    hi = (1.0 - beta) * l1B0 + beta * l1Pf
    mid = beta * l1Pf + (1.0 - beta) * lnB0
    top = BoundReport(
        "lemma1_lambda_max",
        max((1.0 - beta) * l1B0, mid),
        hi,
        {"lambda_1_B0": l1B0, "lambda_n_B0": lnB0, "lambda_1_Pf": l1Pf, "beta": beta},
    )
    bottom = BoundReport(
        "lemma1_lambda_min",
        (1.0 - beta) * lnB0,
        min((1.0 - beta) * l1B0, mid),
        {"lambda_1_B0": l1B0, "lambda_n_B0": lnB0, "lambda_1_Pf": l1Pf, "beta": beta},
    )
    return top, bottom


def bounds_kappa_B(l1B0: float, lnB0: float, l1Pf: float, beta: float) -> BoundReport:
    """Catalogue lemma2: bounds on kappa(B) for the hybrid covariance.

      lower = max[1/kappa(B0) + t, (1/kappa(B0) + t)^-1]
      upper = kappa(B0) * (1 + t),    t = beta l1Pf / ((1-beta) l1B0)

    The lower bound diverges as beta -> 1; at beta = 1 both are +inf
    sentinels.
    """
    _check_beta(beta)
    if not l1B0 >= lnB0 > 0:
        raise ValueError(f"need l1B0 >= lnB0 > 0, got {l1B0}, {lnB0}")
    kappa0 = l1B0 / lnB0
    t = _hybrid_growth(l1B0, l1Pf, beta)
    terms = {
        "kappa_B0": kappa0,
        "growth_t": t,
        "lambda_1_B0": l1B0,
        "lambda_n_B0": lnB0,
        "lambda_1_Pf": l1Pf,
        "beta": beta,
    }
    if math.isinf(t):
        return BoundReport("lemma2", INF, INF, terms)
    base = 1.0 / kappa0 + t
    return BoundReport("lemma2", max(base, 1.0 / base), kappa0 * (1.0 + t), terms)


def bounds_thm3(kappaB: float, l1B: float, lnB: float, l1K: float) -> BoundReport:
    """Catalogue thm3: kappa(S) bounds from the exact spectrum of B.

      lower = max[kappa(B)/(1 + l1(B) l1K), (1 + l1(B) l1K)/kappa(B)]
      upper = (1 + ln(B) l1K) * kappa(B)
    """
    amp = 1.0 + l1B * l1K
    terms = {"kappa_B": kappaB, "lambda_1_B": l1B, "lambda_n_B": lnB, "lambda_1_K": l1K}
    if math.isinf(kappaB):
        return BoundReport("thm3", INF, INF, terms)
    return BoundReport(
        "thm3",
        max(kappaB / amp, amp / kappaB),
        (1.0 + lnB * l1K) * kappaB,
        terms,
    )


def bounds_thm4(l1B0: float, lnB0: float, l1Pf: float, l1K: float, beta: float) -> BoundReport:
    """Catalogue thm4: kappa(S) bounds from component extremes only.

      Gamma_lambda_n_B = min[(1-b) lnB0 + b l1Pf, (1-b) l1B0]
      gamma_kappa_B    = max[1/kappa(B0) + t, (1/kappa(B0) + t)^-1]
      Gamma_kappa_B    = kappa(B0) (1 + t)
      lower = max[1/Gamma_kappa_B + (1-b) lnB0 l1K,
                  (1/gamma_kappa_B + Gamma_lambda_n_B l1K)^-1, 1]
      upper = Gamma_kappa_B + ((1-b) l1B0 + b l1Pf) l1K

    The upper bound is the +inf sentinel at beta = 1.
    """
    _check_beta(beta)
    if not l1B0 >= lnB0 > 0:
        raise ValueError(f"need l1B0 >= lnB0 > 0, got {l1B0}, {lnB0}")
    kappa0 = l1B0 / lnB0
    t = _hybrid_growth(l1B0, l1Pf, beta)
    Gamma_lambda_n_B = min((1.0 - beta) * lnB0 + beta * l1Pf, (1.0 - beta) * l1B0)
    terms = {
        "kappa_B0": kappa0,
        "growth_t": t,
        "Gamma_lambda_n_B": Gamma_lambda_n_B,
        "lambda_1_B0": l1B0,
        "lambda_n_B0": lnB0,
        "lambda_1_Pf": l1Pf,
        "lambda_1_K": l1K,
        "beta": beta,
    }
    if math.isinf(t):
        terms["gamma_kappa_B"] = INF
        terms["Gamma_kappa_B"] = INF
        return BoundReport("thm4", 1.0, INF, terms)
    base = 1.0 / kappa0 + t
    gamma_kappa_B = max(base, 1.0 / base)
    Gamma_kappa_B = kappa0 * (1.0 + t)
    terms["gamma_kappa_B"] = gamma_kappa_B
    terms["Gamma_kappa_B"] = Gamma_kappa_B
    lower = max(
        1.0 / Gamma_kappa_B + (1.0 - beta) * lnB0 * l1K,
        1.0 / (1.0 / gamma_kappa_B + Gamma_lambda_n_B * l1K),
        1.0,
    )
    upper = Gamma_kappa_B + ((1.0 - beta) * l1B0 + beta * l1Pf) * l1K
    return BoundReport("thm4", lower, upper, terms)


def bounds_coro2(l1B0: float, lnB0: float, l1Pf: float, sigma2_R: float, beta: float) -> BoundReport:
    """Catalogue coro2: thm4 specialised to unit-entry H rows and R = sigma2 I.

    For such operators l1(K) = 1/sigma2_R exactly, so the bounds need no
    explicit K.  Callers must ensure the operator actually is of that form.
    """
    if sigma2_R <= 0:
        raise ValueError(f"sigma2_R must be positive, got {sigma2_R}")
    report = bounds_thm4(l1B0, lnB0, l1Pf, 1.0 / sigma2_R, beta)
    terms = dict(report.terms)
    terms["sigma2_R"] = sigma2_R
    return BoundReport("coro2", report.lower, report.upper, terms)


def bounds_thm5(l1B0: float, lnB0: float, l1Pf: float, l1K: float, beta: float) -> BoundReport:
    """Catalogue thm5: preconditioned kappa(S_P) bounds with the max switch.

      upper = 1 + sqrt((b-b^2) l1B0 l1Pf l1K^2)
                + max[(1-b) l1B0 l1K, b l1Pf l1K]
      lower = 1 + max[(1-b) l1K lnB0, sqrt((b-b^2) lnB0 l1Pf l1K^2)]

    Well defined on all of [0, 1]; l1(K^2) = l1(K)^2 since K is symmetric
    PSD.  The max in the upper bound switches branch at switch_point().
    """
    _check_beta(beta)
    bb = max(beta - beta * beta, 0.0)
    l1K2 = l1K * l1K
    cross_hi = math.sqrt(bb * l1B0 * l1Pf * l1K2)
    cross_lo = math.sqrt(bb * lnB0 * l1Pf * l1K2)
    terms = {
        "lambda_1_B0": l1B0,
        "lambda_n_B0": lnB0,
        "lambda_1_Pf": l1Pf,
        "lambda_1_K": l1K,
        "lambda_1_K2": l1K2,
        "beta": beta,
        "cross_term_upper": cross_hi,
        "cross_term_lower": cross_lo,
    }
    upper = 1.0 + cross_hi + max((1.0 - beta) * l1B0 * l1K, beta * l1Pf * l1K)
    lower = 1.0 + max((1.0 - beta) * l1K * lnB0, cross_lo)
    return BoundReport("thm5", lower, upper, terms)


def bounds_thm6(l1B0: float, l1Pf: float, l1K: float, beta: float) -> BoundReport:
    """Catalogue thm6: coarse preconditioned bound without the switch.

      1 <= kappa(S_P) <= 1 + [(1-b) l1B0 + b l1Pf] l1K
    """
    _check_beta(beta)
    upper = 1.0 + ((1.0 - beta) * l1B0 + beta * l1Pf) * l1K
    terms = {"lambda_1_B0": l1B0, "lambda_1_Pf": l1Pf, "lambda_1_K": l1K, "beta": beta}
    return BoundReport("thm6", 1.0, upper, terms)


def switch_point(l1B0: float, l1Pf: float) -> float:
    """Weight beta* where (1-beta) l1(B0) = beta l1(Pf).

    This is where the max term in the thm5 upper bound changes branch and
    where the preconditioned condition number is near its minimum.
    """
    if l1B0 < 0 or l1Pf < 0:
        raise ValueError("eigenvalues must be nonnegative")
    if l1B0 == 0 and l1Pf == 0:
        raise DegenerateInputs("both eigenvalues are zero; switch point undefined")
    return l1B0 / (l1B0 + l1Pf)


# ---------------------------------------------------------------------------
# Reusable eigenvalue-inequality checks (test oracles)
# ---------------------------------------------------------------------------


def _descending_eigs(A: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(A)[::-1]


def check_weyl_inequalities(A1: np.ndarray, A2: np.ndarray, rel_slack: float = 1e-10) -> bool:
    """Eigenvalue-sum sandwich for symmetric A1, A2: for every k,

        lam_k(A1) + lam_n(A2) <= lam_k(A1 + A2) <= lam_k(A1) + lam_1(A2),

    with eigenvalues ordered descending.  Slack is relative to the overall
    eigenvalue scale.
    """
    require_symmetric(A1, name="A1")
    require_symmetric(A2, name="A2")
    w1 = _descending_eigs(A1)
    w2 = _descending_eigs(A2)
    ws = _descending_eigs(A1 + A2)
    scale = max(np.max(np.abs(w1)), np.max(np.abs(w2)), 1.0)
    slack = rel_slack * scale
    lo = w1 + w2[-1] - slack
    hi = w1 + w2[0] + slack
    return bool(np.all(lo <= ws) and np.all(ws <= hi))


def check_product_inequality(A1: np.ndarray, A2: np.ndarray, rel_slack: float = 1e-10) -> bool:
    """Largest-eigenvalue bounds for the product of two symmetric PSD matrices:

        max[lam_1(A1) lam_n(A2), lam_n(A1) lam_1(A2)]
            <= lam_1(A1 A2) <= lam_1(A1) lam_1(A2).

    Raises NotPSD when either input fails the PSD tolerance.  lam_1(A1 A2)
    is real because A1 A2 is similar to the symmetric PSD matrix
    sqrt(A1) A2 sqrt(A1).
    """
    for name, A in (("A1", A1), ("A2", A2)):
        require_symmetric(A, name=name)
        w = np.linalg.eigvalsh(A)
        if w[0] < -PSD_RTOL * max(w[-1], 0.0):
            raise NotPSD(f"{name} has eigenvalue {w[0]:.3e} below the PSD tolerance")
    w1 = _descending_eigs(A1)
    w2 = _descending_eigs(A2)
    lam1_prod = float(np.max(np.linalg.eigvals(A1 @ A2).real))
    lo = max(w1[0] * w2[-1], w1[-1] * w2[0])
    hi = w1[0] * w2[0]
    slack = rel_slack * max(hi, 1.0)
    return bool(lo - slack <= lam1_prod <= hi + slack)
