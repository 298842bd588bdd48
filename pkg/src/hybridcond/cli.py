"""Command-line entry point.

Thin shell over the library: every subcommand is a direct call into the
experiments/validation/bounds modules, so CLI results and library results
are identical.  All randomness is seed-flagged; nothing reads entropy from
the environment.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 validation failure.  The output directory can also be set through the
HYBRIDCOND_OUTDIR environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .bounds import bounds_coro2, bounds_kappa_B, bounds_thm4, bounds_thm5, bounds_thm6, switch_point
from .config import config_from_mapping, load_config
from .errors import (
    ConfigParseError,
    HybridCondError,
    NearSingularBackground,
    UnknownFigure,
)
from .experiments import (
    cg_sweep,
    emit_cg_csv,
    emit_eigencurve_csv,
    emit_sweep_csv,
    assemble_problem,
    run_beta_sweep,
    run_eigen_vs_lengthscale,
    run_figure,
)
from .util import PACKAGE_VERSION
from .validation import run_sandwich_suite

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VALIDATION = 4

OUTDIR_ENV = "HYBRIDCOND_OUTDIR"


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="YAML configuration file")
    parser.add_argument("--n", type=int)
    parser.add_argument("--m", type=int)
    parser.add_argument("--p", type=int)
    parser.add_argument("--l0", type=float, dest="L0")
    parser.add_argument("--lens", type=float, dest="Lens")
    parser.add_argument("--sigma2-b0", type=float, dest="sigma2_B0")
    parser.add_argument("--sigma2-pf", type=float, dest="sigma2_Pf")
    parser.add_argument("--sigma2-r", type=float, dest="sigma2_R")
    parser.add_argument("--h-variant", type=int, dest="H_variant", choices=(1, 2, 3, 4))
    parser.add_argument("--ensemble-seed", type=int)
    parser.add_argument("--placement-seed", type=int)
    parser.add_argument("--rhs-seed", type=int)
    parser.add_argument(
        "--beta-grid",
        help="START:STOP:NUM uniform grid, e.g. 0:0.99:50",
    )
    parser.add_argument("--preconditioned", action="store_true", default=None)


def _collect_overrides(args: argparse.Namespace) -> dict:
    keys = (
        "n", "m", "p", "L0", "Lens", "sigma2_B0", "sigma2_Pf", "sigma2_R",
        "H_variant", "ensemble_seed", "placement_seed", "rhs_seed", "preconditioned",
    )
    overrides: dict = {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}
    if getattr(args, "beta_grid", None):
        try:
            start, stop, num = args.beta_grid.split(":")
            overrides["beta_grid"] = np.linspace(float(start), float(stop), int(num))
        except ValueError as exc:
            raise ConfigParseError(f"bad --beta-grid {args.beta_grid!r}: {exc}")
    return overrides


def _resolve_config(args: argparse.Namespace):
    overrides = _collect_overrides(args)
    if getattr(args, "config", None):
        return load_config(args.config, overrides)
    return config_from_mapping(overrides)


def _out_dir(args: argparse.Namespace) -> Path:
    if getattr(args, "out", None):
        out = Path(args.out)
    else:
        out = Path(os.environ.get(OUTDIR_ENV, "runs"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridcond",
        description="Condition-number analysis of hybrid-covariance variational assimilation",
    )
    parser.add_argument("--version", action="version", version=f"hybridcond {PACKAGE_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fig = sub.add_parser("figure", help="run a named figure preset end to end")
    p_fig.add_argument("figure_id", help="fig1 .. fig8")
    p_fig.add_argument("--out", type=Path)
    p_fig.add_argument("--threads", type=int, default=1)

    p_sweep = sub.add_parser("sweep", help="run one beta sweep from a config")
    _add_param_flags(p_sweep)
    p_sweep.add_argument("--out", type=Path)
    p_sweep.add_argument("--threads", type=int, default=1)
    p_sweep.add_argument("--name", default="sweep", help="output CSV stem")

    p_cg = sub.add_parser("cg", help="CG convergence study")
    _add_param_flags(p_cg)
    p_cg.add_argument("--out", type=Path)
    p_cg.add_argument("--tols", default="1e-6", help="comma-separated tolerances")
    p_cg.add_argument("--name", default="cg", help="output CSV stem")

    p_eig = sub.add_parser("eigencurve", help="largest eigenvalues vs length scale")
    _add_param_flags(p_eig)
    p_eig.add_argument("--out", type=Path)
    p_eig.add_argument("--l-grid", default="0.2:2.0:19", help="START:STOP:NUM")
    p_eig.add_argument("--seeds", type=int, default=10, help="ensemble seeds per point")
    p_eig.add_argument("--name", default="eigencurve", help="output CSV stem")

    p_val = sub.add_parser("validate", help="randomized bound-sandwich suite")
    p_val.add_argument("--trials", type=int, default=200)
    p_val.add_argument("--seed", type=int, default=0)

    p_bounds = sub.add_parser(
        "bounds", help="evaluate the bound formulas from scalar eigenvalue inputs"
    )
    p_bounds.add_argument("--l1b0", type=float, required=True)
    p_bounds.add_argument("--lnb0", type=float, required=True)
    p_bounds.add_argument("--l1pf", type=float, required=True)
    p_bounds.add_argument("--l1k", type=float, required=True)
    p_bounds.add_argument("--beta", type=float, required=True)
    p_bounds.add_argument("--sigma2-r", type=float, dest="sigma2_R")
    return parser


def _cmd_figure(args: argparse.Namespace) -> int:
    written = run_figure(args.figure_id, _out_dir(args), threads=args.threads)
    for path in written:
        print(path)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    out = _out_dir(args)
    problem = assemble_problem(cfg)
    records = run_beta_sweep(cfg, problem=problem, threads=args.threads)
    path = out / f"{args.name}.csv"
    emit_sweep_csv(
        path, cfg, records,
        switch_beta=problem.switch_beta if cfg.preconditioned else None,
    )
    print(path)
    return EXIT_OK


def _cmd_cg(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    out = _out_dir(args)
    try:
        tols = tuple(float(t) for t in args.tols.split(","))
    except ValueError as exc:
        raise ConfigParseError(f"bad --tols {args.tols!r}: {exc}")
    rows = cg_sweep(cfg, tol_grid=tols)
    path = out / f"{args.name}.csv"
    emit_cg_csv(path, cfg, rows)
    print(path)
    return EXIT_OK


def _cmd_eigencurve(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    out = _out_dir(args)
    try:
        start, stop, num = args.l_grid.split(":")
        grid = np.linspace(float(start), float(stop), int(num))
    except ValueError as exc:
        raise ConfigParseError(f"bad --l-grid {args.l_grid!r}: {exc}")
    rows = run_eigen_vs_lengthscale(cfg, grid, n_seeds=args.seeds)
    path = out / f"{args.name}.csv"
    emit_eigencurve_csv(path, cfg, rows)
    print(path)
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    violations = run_sandwich_suite(trials=args.trials, seed=args.seed)
    if violations:
        for line in violations:
            print(f"VIOLATION {line}", file=sys.stderr)
        print(f"{len(violations)} sandwich violations in {args.trials} trials")
        return EXIT_VALIDATION
    print(f"all sandwich checks passed ({args.trials} trials, seed {args.seed})")
    return EXIT_OK


def _cmd_bounds(args: argparse.Namespace) -> int:
    reports = [
        bounds_kappa_B(args.l1b0, args.lnb0, args.l1pf, args.beta),
        bounds_thm4(args.l1b0, args.lnb0, args.l1pf, args.l1k, args.beta),
        bounds_thm5(args.l1b0, args.lnb0, args.l1pf, args.l1k, args.beta),
        bounds_thm6(args.l1b0, args.l1pf, args.l1k, args.beta),
    ]
    if args.sigma2_R is not None:
        reports.append(bounds_coro2(args.l1b0, args.lnb0, args.l1pf, args.sigma2_R, args.beta))
    payload = {
        "inputs": {
            "lambda_1_B0": args.l1b0,
            "lambda_n_B0": args.lnb0,
            "lambda_1_Pf": args.l1pf,
            "lambda_1_K": args.l1k,
            "beta": args.beta,
            "sigma2_R": args.sigma2_R,
        },
        "switch_beta": switch_point(args.l1b0, args.l1pf),
        "reports": [r.to_dict() for r in reports],
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


_COMMANDS = {
    "figure": _cmd_figure,
    "sweep": _cmd_sweep,
    "cg": _cmd_cg,
    "eigencurve": _cmd_eigencurve,
    "validate": _cmd_validate,
    "bounds": _cmd_bounds,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, matching our config-error code
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigParseError, UnknownFigure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NearSingularBackground as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except HybridCondError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main() -> None:
    sys.exit(run())
