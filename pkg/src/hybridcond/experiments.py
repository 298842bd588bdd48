"""Sweep runners: beta sweeps, eigenvalue-vs-length-scale curves, parameter
families, CG convergence studies, and figure-preset emission.

Every runner assembles its matrices once (B0, B1, X_f, P_f, K, U) and then
walks the beta grid; all bound evaluations reuse the precomputed extreme
eigenvalues, so the per-point cost is the eigensolves of B and of the
assembled Hessian.  Records carry the exact condition number, every
applicable bound report, and a flag column; a record is flagged (never
silently dropped) when the background covariance is numerically singular or
when a bound sandwich is violated.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .util import PACKAGE_VERSION as _pkg_version
from .bounds import (
    INF,
    BoundReport,
    bounds_coro2,
    bounds_kappa_B,
    bounds_thm3,
    bounds_thm4,
    bounds_thm5,
    bounds_thm6,
    switch_point,
)
from .config import CG_GRID, ExperimentConfig, get_preset
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
from .hessian import SINGULARITY_RTOL, assemble_cvt_factor, assemble_preconditioned
from .matio import write_csv, write_metadata
from .observation import ObservationOperator, build_H, build_K, single_time_setup
from .solver import cg_solve, make_rhs_spec
from .util import symmetrize

SELECTION_VARIANTS = (1, 2, 4)  # unit-entry rows: lambda_1(K) = 1/sigma2_R exactly

#: Sandwich slack: 1e-9 relative, loosened where eigensolver accuracy
#: degrades (kappa beyond 1e10).
SANDWICH_RTOL = 1e-9
SANDWICH_RTOL_EXTREME = 1e-6
SANDWICH_KAPPA_CUTOFF = 1e10


def sandwich_ok(kappa: float, report: BoundReport) -> bool:
    """lower <= kappa <= upper with floating-point slack."""
    if not math.isfinite(kappa):
        return True  # divergence rows are flagged separately
    slack = SANDWICH_RTOL if kappa <= SANDWICH_KAPPA_CUTOFF else SANDWICH_RTOL_EXTREME
    lo = report.lower * (1.0 - slack) if math.isfinite(report.lower) else report.lower
    hi = report.upper * (1.0 + slack) if math.isfinite(report.upper) else report.upper
    return lo <= kappa <= hi


@dataclass(frozen=True, eq=False)
class AssembledProblem:
    """All beta-independent pieces of one experiment."""

    config: ExperimentConfig
    geom: GridGeometry
    B0: CovarianceMatrix
    X_f: EnsembleFactor
    Pf: CovarianceMatrix
    U: np.ndarray
    H: ObservationOperator
    K: np.ndarray
    l1B0: float
    lnB0: float
    l1Pf: float
    l1K: float

    @property
    def switch_beta(self) -> float:
        return switch_point(self.l1B0, self.l1Pf)


def assemble_problem(config: ExperimentConfig) -> AssembledProblem:
    """Build covariances, ensemble, observation operator and K for a config."""
    geom = GridGeometry(config.n)
    B0 = build_static_B(geom, config.L0, config.sigma2_B0)
    B1 = CovarianceMatrix(
        config.sigma2_Pf * build_soar(geom, config.Lens).data,
        "static",
        {"L": config.Lens, "sigma2": config.sigma2_Pf},
    )
    X_f = sample_ensemble_factor(B1, config.m, config.ensemble_seed)
    Pf = ensemble_covariance(X_f)
    U = sym_sqrt(B0)
    H = build_H(config.H_variant, config.n, config.p, seed=config.placement_seed)
    K = build_K(single_time_setup(H, config.sigma2_R))
    # eigh (not eigvalsh): the sweep eigensolves B = hybrid(B0, Pf, beta)
    # with the vector-computing driver, and at beta = 0 the lemma2 bounds
    # collapse onto kappa(B0) exactly, so both must share one driver or the
    # equality sits on eigensolver noise for ill-conditioned B0.
    wB0 = np.linalg.eigh(B0.data)[0]
    wPf = np.linalg.eigvalsh(Pf.data)
    wK = np.linalg.eigvalsh(K)
    return AssembledProblem(
        config=config,
        geom=geom,
        B0=B0,
        X_f=X_f,
        Pf=Pf,
        U=U,
        H=H,
        K=K,
        l1B0=float(wB0[-1]),
        lnB0=float(wB0[0]),
        l1Pf=float(wPf[-1]),
        l1K=float(wK[-1]),
    )


@dataclass(frozen=True)
class SweepRecord:
    """One beta point of a sweep (config is the shared immutable snapshot)."""

    config: ExperimentConfig
    beta: float
    kappa_exact: float
    kappa_B: float
    reports: Mapping[str, BoundReport]
    flags: tuple[str, ...] = ()
    wall_time: float = 0.0

    @property
    def violated(self) -> bool:
        return any(f.startswith("sandwich_violation") for f in self.flags)


def _unpreconditioned_point(problem: AssembledProblem, beta: float) -> SweepRecord:
    t0 = time.perf_counter()
    cfg = problem.config
    flags: list[str] = []
    B = hybrid_B(problem.B0, problem.Pf, beta)
    wB, vB = np.linalg.eigh(B.data)
    reports: dict[str, BoundReport] = {
        "lemma2": bounds_kappa_B(problem.l1B0, problem.lnB0, problem.l1Pf, beta),
        "thm4": bounds_thm4(problem.l1B0, problem.lnB0, problem.l1Pf, problem.l1K, beta),
    }
    if cfg.H_variant in SELECTION_VARIANTS:
        reports["coro2"] = bounds_coro2(
            problem.l1B0, problem.lnB0, problem.l1Pf, cfg.sigma2_R, beta
        )
    if wB[0] <= 0 or wB[0] <= SINGULARITY_RTOL * wB[-1]:
        flags.append("near_singular")
        kappa_B = INF
        kappa = INF
        reports["thm3"] = bounds_thm3(INF, float(wB[-1]), float(wB[0]), problem.l1K)
    else:
        kappa_B = float(wB[-1] / wB[0])
        reports["thm3"] = bounds_thm3(kappa_B, float(wB[-1]), float(wB[0]), problem.l1K)
        S = symmetrize((vB / wB) @ vB.T + problem.K)
        wS = np.linalg.eigvalsh(S)
        kappa = float(wS[-1] / wS[0]) if wS[0] > 0 else INF
        if not sandwich_ok(kappa_B, reports["lemma2"]):
            flags.append("sandwich_violation:lemma2")
        for name in ("thm3", "thm4", "coro2"):
            if name in reports and not sandwich_ok(kappa, reports[name]):
                flags.append(f"sandwich_violation:{name}")
    return SweepRecord(cfg, beta, kappa, kappa_B, reports, tuple(flags), time.perf_counter() - t0)


def _preconditioned_point(problem: AssembledProblem, beta: float) -> SweepRecord:
    t0 = time.perf_counter()
    flags: list[str] = []
    Uh = assemble_cvt_factor(problem.U, problem.X_f.data, beta)
    SP = assemble_preconditioned(Uh, problem.K)
    w = np.linalg.eigvalsh(SP.data)
    kappa = float(w[-1] / w[0]) if w[0] > 0 else INF
    reports = {
        "thm5": bounds_thm5(problem.l1B0, problem.lnB0, problem.l1Pf, problem.l1K, beta),
        "thm6": bounds_thm6(problem.l1B0, problem.l1Pf, problem.l1K, beta),
    }
    for name, report in reports.items():
        if not sandwich_ok(kappa, report):
            flags.append(f"sandwich_violation:{name}")
    return SweepRecord(problem.config, beta, kappa, float("nan"), reports, tuple(flags), time.perf_counter() - t0)


def run_beta_sweep(
    config: ExperimentConfig,
    problem: AssembledProblem | None = None,
    threads: int = 1,
) -> list[SweepRecord]:
    """Sweep the configured beta grid and evaluate every applicable bound.

    Near-singular backgrounds become +inf rows flagged "near_singular"
    rather than aborting the sweep.
    """
    if problem is None:
        problem = assemble_problem(config)
    point: Callable[[AssembledProblem, float], SweepRecord]
    point = _preconditioned_point if config.preconditioned else _unpreconditioned_point
    grid = config.grid
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda b: point(problem, b), grid))
    return [point(problem, b) for b in grid]


def run_eigen_vs_lengthscale(
    config: ExperimentConfig,
    L_grid: Sequence[float],
    n_seeds: int = 10,
) -> list[dict]:
    """Largest eigenvalue of B0 and of the sampled P_f per length scale.

    P_f is re-sampled with seeds ensemble_seed .. ensemble_seed+n_seeds-1 at
    each L; the seed spread is reported as a standard-deviation column.
    """
    geom = GridGeometry(config.n)
    rows = []
    for L in L_grid:
        corr = build_soar(geom, float(L))
        l1B0 = config.sigma2_B0 * float(np.linalg.eigvalsh(corr.data)[-1])
        B1 = CovarianceMatrix(config.sigma2_Pf * corr.data, "static", {"L": float(L)})
        samples = []
        for k in range(n_seeds):
            X = sample_ensemble_factor(B1, config.m, config.ensemble_seed + k)
            samples.append(float(np.linalg.eigvalsh(ensemble_covariance(X).data)[-1]))
        arr = np.asarray(samples)
        rows.append(
            {
                "L": float(L),
                "lambda1_B0": l1B0,
                "lambda1_Pf_mean": float(arr.mean()),
                "lambda1_Pf_std": float(arr.std(ddof=1)) if n_seeds > 1 else 0.0,
            }
        )
    return rows


def run_parameter_family(
    config: ExperimentConfig,
    family: str,
    values: Sequence,
    threads: int = 1,
) -> dict:
    """One beta sweep per family value; seeds shared so only `family` varies."""
    if family not in ExperimentConfig.__dataclass_fields__:
        raise ValueError(f"unknown parameter family {family!r}")
    out: dict = {}
    for value in values:
        member = replace(config, **{family: value})
        out[value] = run_beta_sweep(member, threads=threads)
    return out


def cg_sweep(
    config: ExperimentConfig,
    beta_grid: Sequence[float] | None = None,
    tol_grid: Sequence[float] = (1e-6,),
) -> list[dict]:
    """One CG run per (beta, tol): iteration counts alongside kappa and the
    matching upper bound (thm4 unpreconditioned, thm5 preconditioned).

    The random right-hand-side vectors are drawn once (rhs_seed) and reused
    across the grid.  Per-run failures become flagged rows, not aborts.
    """
    problem = assemble_problem(config)
    cfg = problem.config
    spec = make_rhs_spec(cfg.n, cfg.p, cfg.rhs_seed)
    grid = tuple(beta_grid) if beta_grid is not None else (
        cfg.beta_grid if cfg.beta_grid is not None else CG_GRID
    )
    rows: list[dict] = []
    for beta in grid:
        B = hybrid_B(problem.B0, problem.Pf, beta)
        wB, vB = np.linalg.eigh(B.data)
        row_base = {"beta": float(beta), "seed": cfg.rhs_seed}
        if wB[0] <= 0 or wB[0] <= SINGULARITY_RTOL * wB[-1]:
            for tol in tol_grid:
                rows.append(
                    row_base
                    | {
                        "tol": float(tol),
                        "iterations": -1,
                        "converged": False,
                        "kappa": INF,
                        "bound_upper": INF,
                        "flag": "near_singular",
                    }
                )
            continue
        Binv = symmetrize((vB / wB) @ vB.T)
        b = Binv @ spec.x_diff - problem.H.matrix.T @ spec.d
        if cfg.preconditioned:
            Uh = assemble_cvt_factor(problem.U, problem.X_f.data, beta)
            matrix = assemble_preconditioned(Uh, problem.K).data
            rhs = Uh.data.T @ b
            upper = bounds_thm5(problem.l1B0, problem.lnB0, problem.l1Pf, problem.l1K, beta).upper
        else:
            matrix = symmetrize(Binv + problem.K)
            rhs = b
            upper = bounds_thm4(problem.l1B0, problem.lnB0, problem.l1Pf, problem.l1K, beta).upper
        wS = np.linalg.eigvalsh(matrix)
        kappa = float(wS[-1] / wS[0]) if wS[0] > 0 else INF
        for tol in tol_grid:
            result = cg_solve(matrix, rhs, tol=float(tol))
            rows.append(
                row_base
                | {
                    "tol": float(tol),
                    "iterations": result.iterations,
                    "converged": result.converged,
                    "kappa": kappa,
                    "bound_upper": upper,
                    "flag": "" if result.converged else "not_converged",
                }
            )
    return rows


def run_cg_study(config: ExperimentConfig, tol_grid: Sequence[float] = (1e-6,)) -> list[dict]:
    """CG convergence study on the configured grid (figure 7/8 presets)."""
    return cg_sweep(config, beta_grid=None, tol_grid=tol_grid)


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------

UNPREC_COLUMNS = (
    "beta", "kappa", "log10_kappa", "kappa_B",
    "lemma2_lower", "lemma2_upper",
    "thm3_lower", "thm3_upper",
    "thm4_lower", "thm4_upper", "log10_thm4_upper",
    "coro2_lower", "coro2_upper",
    "flag",
)

PREC_COLUMNS = (
    "beta", "kappa", "log10_kappa",
    "thm5_lower", "thm5_upper", "log10_thm5_upper",
    "thm6_lower", "thm6_upper",
    "switch_beta",
    "flag",
)

def cg_columns(preconditioned: bool) -> tuple[str, ...]:
    bound = "bound_upper_thm5" if preconditioned else "bound_upper_thm4"
    return ("beta", "tol", "iterations", "converged", "kappa", bound, "seed", "flag")

EIGENCURVE_COLUMNS = ("L", "lambda1_B0", "lambda1_Pf_mean", "lambda1_Pf_std")

NAN = float("nan")


def _log10(x: float) -> float:
    if math.isinf(x):
        return INF
    return math.log10(x) if x > 0 else NAN


def record_row_unpreconditioned(rec: SweepRecord) -> list:
    c2 = rec.reports.get("coro2")
    return [
        rec.beta,
        rec.kappa_exact,
        _log10(rec.kappa_exact),
        rec.kappa_B,
        rec.reports["lemma2"].lower,
        rec.reports["lemma2"].upper,
        rec.reports["thm3"].lower,
        rec.reports["thm3"].upper,
        rec.reports["thm4"].lower,
        rec.reports["thm4"].upper,
        _log10(rec.reports["thm4"].upper),
        c2.lower if c2 else NAN,
        c2.upper if c2 else NAN,
        ";".join(rec.flags),
    ]


def record_row_preconditioned(rec: SweepRecord, switch_beta: float) -> list:
    return [
        rec.beta,
        rec.kappa_exact,
        _log10(rec.kappa_exact),
        rec.reports["thm5"].lower,
        rec.reports["thm5"].upper,
        _log10(rec.reports["thm5"].upper),
        rec.reports["thm6"].lower,
        rec.reports["thm6"].upper,
        switch_beta,
        ";".join(rec.flags),
    ]


def _metadata(
    config: ExperimentConfig,
    columns: Sequence[str],
    *,
    figure_id: str | None,
    notes: str,
    wall_time: float,
    extra: Mapping | None = None,
) -> dict:
    meta = {
        "figure_id": figure_id,
        "config": config.to_dict(),
        "columns": list(columns),
        "package_version": _pkg_version,
        "notes": notes,
        "run": {
            "created_unix": time.time(),
            "wall_time_seconds": wall_time,
        },
    }
    if extra:
        meta.update(extra)
    return meta


def emit_sweep_csv(
    path: Path,
    config: ExperimentConfig,
    records: Sequence[SweepRecord],
    *,
    switch_beta: float | None = None,
    notes: str = "",
) -> None:
    if config.preconditioned:
        assert switch_beta is not None
        rows = [record_row_preconditioned(r, switch_beta) for r in records]
        columns = PREC_COLUMNS
    else:
        rows = [record_row_unpreconditioned(r) for r in records]
        columns = UNPREC_COLUMNS
    write_csv(path, columns, rows)
    wall = float(sum(r.wall_time for r in records))
    write_metadata(
        path.with_suffix(".meta.json"),
        _metadata(config, columns, figure_id=config.figure_id, notes=notes, wall_time=wall),
    )


def _family_label(family: str, value) -> str:
    if isinstance(value, float):
        return f"{family}={value:g}"
    return f"{family}={value}"


def emit_family_csv(
    path: Path,
    config: ExperimentConfig,
    family: str,
    sweeps: Mapping,
    *,
    notes: str = "",
) -> None:
    """Wide per-panel CSV: beta plus kappa/upper-bound columns per value."""
    upper_key = "thm5" if config.preconditioned else "thm4"
    values = list(sweeps)
    grid = [rec.beta for rec in sweeps[values[0]]]
    header = ["beta"]
    for v in values:
        label = _family_label(family, v)
        header += [f"kappa[{label}]", f"upper[{label}]"]
    rows = []
    for i, beta in enumerate(grid):
        row: list = [beta]
        for v in values:
            rec = sweeps[v][i]
            row += [rec.kappa_exact, rec.reports[upper_key].upper]
        rows.append(row)
    write_csv(path, header, rows)
    wall = float(sum(r.wall_time for recs in sweeps.values() for r in recs))
    write_metadata(
        path.with_suffix(".meta.json"),
        _metadata(
            config, header, figure_id=config.figure_id, notes=notes, wall_time=wall,
            extra={"family": family, "values": [str(v) for v in values]},
        ),
    )


def emit_cg_csv(path: Path, config: ExperimentConfig, rows: Sequence[dict], *, notes: str = "") -> None:
    columns = cg_columns(config.preconditioned)
    table = [[r["beta"], r["tol"], r["iterations"], r["converged"], r["kappa"],
              r["bound_upper"], r["seed"], r["flag"]] for r in rows]
    write_csv(path, columns, table)
    write_metadata(
        path.with_suffix(".meta.json"),
        _metadata(config, columns, figure_id=config.figure_id, notes=notes, wall_time=0.0),
    )


def emit_eigencurve_csv(
    path: Path, config: ExperimentConfig, rows: Sequence[dict], *, notes: str = ""
) -> None:
    table = [[r["L"], r["lambda1_B0"], r["lambda1_Pf_mean"], r["lambda1_Pf_std"]] for r in rows]
    write_csv(path, EIGENCURVE_COLUMNS, table)
    write_metadata(
        path.with_suffix(".meta.json"),
        _metadata(config, EIGENCURVE_COLUMNS, figure_id=config.figure_id, notes=notes, wall_time=0.0),
    )


def run_figure(figure_id: str, out_dir: str | Path, threads: int = 1) -> list[Path]:
    """Run a named figure preset end to end; returns the written CSV paths."""
    preset = get_preset(figure_id)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    if preset.kind == "bounds_pair":
        for preconditioned in (False, True):
            cfg = replace(preset.base, preconditioned=preconditioned, figure_id=figure_id)
            problem = assemble_problem(cfg)
            records = run_beta_sweep(cfg, problem=problem, threads=threads)
            suffix = "preconditioned" if preconditioned else "unpreconditioned"
            path = out / f"{figure_id}_{suffix}.csv"
            emit_sweep_csv(
                path, cfg, records,
                switch_beta=problem.switch_beta if preconditioned else None,
                notes=preset.notes,
            )
            written.append(path)
    elif preset.kind == "eigencurve":
        rows = run_eigen_vs_lengthscale(preset.base, preset.L_grid)
        path = out / f"{figure_id}_eigencurve.csv"
        emit_eigencurve_csv(path, preset.base, rows, notes=preset.notes)
        written.append(path)
    elif preset.kind == "family":
        for panel in preset.panels:
            sweeps = run_parameter_family(preset.base, panel.family, panel.values, threads=threads)
            path = out / f"{figure_id}{panel.panel}_{panel.family}.csv"
            emit_family_csv(path, preset.base, panel.family, sweeps, notes=preset.notes)
            written.append(path)
    elif preset.kind == "cg":
        rows = run_cg_study(preset.base, tol_grid=preset.tol_grid)
        path = out / f"{figure_id}_cg.csv"
        emit_cg_csv(path, preset.base, rows, notes=preset.notes)
        written.append(path)
    else:  # pragma: no cover - presets are defined in config.py
        raise ValueError(f"unhandled preset kind {preset.kind!r}")
    return written
