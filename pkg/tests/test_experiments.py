"""Sweep runners, figure presets, CSV emission, config handling."""

import json
import math

import numpy as np
import pytest

from hybridcond.config import (
    CG_GRID,
    PREC_GRID,
    UNPREC_GRID,
    ExperimentConfig,
    FIGURE_PRESETS,
    config_from_mapping,
    get_preset,
    load_config,
)
from hybridcond.covariance import CovarianceMatrix, build_soar, GridGeometry
from hybridcond.errors import ConfigParseError, UnknownFigure
from hybridcond.experiments import (
    assemble_problem,
    cg_sweep,
    emit_family_csv,
    emit_sweep_csv,
    run_beta_sweep,
    run_eigen_vs_lengthscale,
    run_figure,
    run_parameter_family,
)
from hybridcond.hessian import assemble_unpreconditioned

SMALL = ExperimentConfig(
    n=48, m=12, p=12, L0=0.6, Lens=0.4,
    beta_grid=tuple(np.linspace(0.0, 0.95, 9)),
)

SMALL_PREC = ExperimentConfig(
    n=48, m=12, p=12, L0=0.6, Lens=0.4, preconditioned=True,
    beta_grid=tuple(np.linspace(0.0, 1.0, 9)),
)


class TestConfig:
    def test_defaults_match_production_scale(self):
        cfg = ExperimentConfig()
        assert cfg.n == 500
        assert cfg.N == 0
        assert cfg.grid == UNPREC_GRID
        assert ExperimentConfig(preconditioned=True).grid == PREC_GRID

    def test_grid_bounds_enforced(self):
        with pytest.raises(ConfigParseError):
            ExperimentConfig(beta_grid=(0.0, 1.2))
        with pytest.raises(ConfigParseError):
            ExperimentConfig(beta_grid=(0.5, 0.1))
        with pytest.raises(ConfigParseError):
            ExperimentConfig(sigma2_R=-1.0)

    def test_mapping_aliases_and_seeds(self):
        cfg = config_from_mapping(
            {"l0": 0.3, "sigma2-b0": 2.0, "h-variant": 2, "p": 10, "n": 40,
             "seeds": {"ensemble": 9, "placement": 8, "rhs": 7}}
        )
        assert cfg.L0 == 0.3
        assert cfg.sigma2_B0 == 2.0
        assert cfg.H_variant == 2
        assert (cfg.ensemble_seed, cfg.placement_seed, cfg.rhs_seed) == (9, 8, 7)

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigParseError):
            config_from_mapping({"frobnicate": 1})

    def test_yaml_load_with_overrides(self, tmp_path):
        path = tmp_path / "cfg.yaml"
        path.write_text(
            "n: 40\nm: 8\np: 10\nl0: 0.5\nlens: 0.3\n"
            "beta_grid:\n  start: 0.0\n  stop: 0.9\n  num: 4\n"
            "seeds:\n  ensemble: 5\n"
        )
        cfg = load_config(path, overrides={"p": 20})
        assert cfg.n == 40
        assert cfg.p == 20
        assert cfg.ensemble_seed == 5
        assert cfg.beta_grid == tuple(np.linspace(0.0, 0.9, 4))

    def test_presets_registered(self):
        assert set(FIGURE_PRESETS) == {f"fig{i}" for i in range(1, 9)}
        with pytest.raises(UnknownFigure):
            get_preset("fig99")

    def test_fig1_parameters(self):
        base = get_preset("fig1").base
        assert (base.n, base.m, base.p) == (500, 50, 100)
        assert (base.L0, base.Lens) == (0.2, 0.05)
        assert base.H_variant == 4
        assert base.sigma2_B0 == base.sigma2_Pf == base.sigma2_R == 1.0

    def test_fig7_parameters(self):
        base = get_preset("fig7").base
        assert (base.L0, base.Lens, base.p) == (0.1, 0.05, 100)
        assert base.H_variant == 4
        assert base.beta_grid == CG_GRID


class TestBetaSweep:
    def test_unpreconditioned_records_complete(self):
        records = run_beta_sweep(SMALL)
        assert len(records) == len(SMALL.grid)
        for rec in records:
            assert {"lemma2", "thm3", "thm4", "coro2"} <= set(rec.reports)
            assert not rec.violated
            assert math.isfinite(rec.kappa_exact)

    def test_beta_zero_matches_static_assembly(self):
        records = run_beta_sweep(SMALL)
        problem = assemble_problem(SMALL)
        S0 = assemble_unpreconditioned(
            CovarianceMatrix(problem.B0.data, "hybrid", {"beta": 0.0}), problem.K
        )
        w = np.linalg.eigvalsh(S0.data)
        kappa_direct = w[-1] / w[0]
        rec0 = records[0]
        assert rec0.beta == 0.0
        assert abs(rec0.kappa_exact - kappa_direct) <= 1e-10 * kappa_direct

    def test_near_singular_rows_flagged_not_fatal(self):
        cfg = ExperimentConfig(
            n=40, m=8, p=10, L0=0.6, Lens=0.4, beta_grid=(0.5, 1.0)
        )
        records = run_beta_sweep(cfg)
        assert math.isfinite(records[0].kappa_exact)
        assert records[1].kappa_exact == math.inf
        assert "near_singular" in records[1].flags

    def test_preconditioned_records_complete_including_endpoint(self):
        records = run_beta_sweep(SMALL_PREC)
        for rec in records:
            assert {"thm5", "thm6"} <= set(rec.reports)
            assert not rec.violated
            assert math.isfinite(rec.kappa_exact)
        assert records[-1].beta == 1.0

    def test_variant3_has_no_coro2(self):
        cfg = ExperimentConfig(n=40, m=8, p=10, L0=0.6, Lens=0.4,
                               H_variant=3, beta_grid=(0.3,))
        (rec,) = run_beta_sweep(cfg)
        assert "coro2" not in rec.reports
        assert not rec.violated

    def test_threads_do_not_change_results(self):
        seq = run_beta_sweep(SMALL)
        par = run_beta_sweep(SMALL, threads=4)
        assert [r.kappa_exact for r in seq] == [r.kappa_exact for r in par]
        assert [r.beta for r in seq] == [r.beta for r in par]


class TestParameterFamily:
    def test_observation_count_leaves_bounds_unchanged(self):
        sweeps = run_parameter_family(SMALL, "p", (6, 12, 24))
        uppers = {
            p: [r.reports["thm4"].upper for r in recs] for p, recs in sweeps.items()
        }
        base = uppers[6]
        for p in (12, 24):
            assert np.allclose(uppers[p], base, rtol=1e-12, atol=0.0)
        kappas = {p: [r.kappa_exact for r in recs] for p, recs in sweeps.items()}
        assert kappas[6] != kappas[12]

    def test_unknown_family_rejected(self):
        with pytest.raises(ValueError):
            run_parameter_family(SMALL, "bogus", (1, 2))


class TestEigenCurve:
    def test_static_eigenvalue_nondecreasing_and_spread_recorded(self):
        cfg = ExperimentConfig(n=60, m=12, sigma2_B0=1.0)
        rows = run_eigen_vs_lengthscale(cfg, (0.2, 0.4, 0.8, 1.6), n_seeds=5)
        lams = [r["lambda1_B0"] for r in rows]
        assert all(b >= a for a, b in zip(lams, lams[1:]))
        assert all(r["lambda1_Pf_std"] > 0 for r in rows)

    def test_variance_scales_eigenvalue(self):
        geom_lam = np.linalg.eigvalsh(build_soar(GridGeometry(60), 0.4).data)[-1]
        cfg = ExperimentConfig(n=60, m=12, sigma2_B0=2.5)
        rows = run_eigen_vs_lengthscale(cfg, (0.4,), n_seeds=2)
        assert rows[0]["lambda1_B0"] == pytest.approx(2.5 * geom_lam, rel=1e-12)


class TestCgSweep:
    def test_rows_and_determinism(self):
        cfg = ExperimentConfig(n=48, m=12, p=12, L0=0.6, Lens=0.4,
                               beta_grid=(0.0, 0.5, 0.9))
        rows1 = cg_sweep(cfg, tol_grid=(1e-4, 1e-6))
        rows2 = cg_sweep(cfg, tol_grid=(1e-4, 1e-6))
        assert rows1 == rows2
        assert len(rows1) == 6
        for row in rows1:
            assert row["converged"]
            assert row["iterations"] >= 1
            assert row["kappa"] >= 1.0
            assert row["bound_upper"] >= row["kappa"] * (1 - 1e-9)

    def test_preconditioned_rows(self):
        cfg = ExperimentConfig(n=48, m=12, p=12, L0=0.6, Lens=0.4,
                               preconditioned=True, beta_grid=(0.0, 0.5, 0.99))
        rows = cg_sweep(cfg)
        assert all(r["converged"] for r in rows)
        assert all(r["bound_upper"] >= r["kappa"] * (1 - 1e-9) for r in rows)


class TestEmission:
    def test_sweep_csv_bytes_reproducible(self, tmp_path):
        records = run_beta_sweep(SMALL)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_sweep_csv(p1, SMALL, records)
        emit_sweep_csv(p2, SMALL, records)
        assert p1.read_bytes() == p2.read_bytes()
        header = p1.read_text().splitlines()[0].split(",")
        assert header[0] == "beta"
        assert "thm4_upper" in header and "log10_kappa" in header

    def test_metadata_sidecar_written(self, tmp_path):
        records = run_beta_sweep(SMALL)
        path = tmp_path / "s.csv"
        emit_sweep_csv(path, SMALL, records)
        meta = json.loads(path.with_suffix(".meta.json").read_text())
        assert meta["config"]["n"] == 48
        assert meta["columns"][0] == "beta"
        assert "created_unix" in meta["run"]

    def test_family_csv_headers_carry_value_labels(self, tmp_path):
        sweeps = run_parameter_family(SMALL, "p", (6, 12))
        path = tmp_path / "fam.csv"
        emit_family_csv(path, SMALL, "p", sweeps)
        header = path.read_text().splitlines()[0]
        assert header.startswith("beta,")
        assert "kappa[p=6]" in header
        assert "upper[p=12]" in header

    def test_run_figure_unknown_id(self, tmp_path):
        with pytest.raises(UnknownFigure):
            run_figure("fig0", tmp_path)
