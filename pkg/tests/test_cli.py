"""CLI behaviour: subcommand dispatch, exit codes, determinism."""

import json

import pytest

from hybridcond.cli import EXIT_CONFIG, EXIT_OK, OUTDIR_ENV, run

SMALL_ARGS = [
    "--n", "48", "--m", "12", "--p", "12",
    "--l0", "0.6", "--lens", "0.4",
    "--beta-grid", "0:0.9:5",
]


class TestDispatch:
    def test_unknown_subcommand_usage_error(self, capsys):
        assert run(["frobnicate"]) == 2
        assert "invalid choice" in capsys.readouterr().err

    def test_unknown_figure_is_config_error(self, tmp_path, capsys):
        assert run(["figure", "fig0", "--out", str(tmp_path)]) == EXIT_CONFIG
        assert "unknown figure" in capsys.readouterr().err

    def test_sweep_writes_csv_and_meta(self, tmp_path, capsys):
        code = run(["sweep", *SMALL_ARGS, "--out", str(tmp_path), "--name", "s"])
        assert code == EXIT_OK
        assert (tmp_path / "s.csv").exists()
        assert (tmp_path / "s.meta.json").exists()
        assert str(tmp_path / "s.csv") in capsys.readouterr().out

    def test_sweep_same_argv_same_bytes(self, tmp_path):
        run(["sweep", *SMALL_ARGS, "--out", str(tmp_path / "r1"), "--name", "s"])
        run(["sweep", *SMALL_ARGS, "--out", str(tmp_path / "r2"), "--name", "s"])
        b1 = (tmp_path / "r1" / "s.csv").read_bytes()
        b2 = (tmp_path / "r2" / "s.csv").read_bytes()
        assert b1 == b2
        m1 = json.loads((tmp_path / "r1" / "s.meta.json").read_text())
        m2 = json.loads((tmp_path / "r2" / "s.meta.json").read_text())
        m1.pop("run"), m2.pop("run")
        assert m1 == m2

    def test_cg_subcommand(self, tmp_path):
        code = run(["cg", *SMALL_ARGS, "--tols", "1e-4,1e-6", "--out", str(tmp_path)])
        assert code == EXIT_OK
        lines = (tmp_path / "cg.csv").read_text().splitlines()
        assert lines[0] == "beta,tol,iterations,converged,kappa,bound_upper_thm4,seed,flag"
        assert len(lines) == 1 + 5 * 2

    def test_eigencurve_subcommand(self, tmp_path):
        code = run([
            "eigencurve", "--n", "40", "--m", "8",
            "--l-grid", "0.3:0.9:3", "--seeds", "2", "--out", str(tmp_path),
        ])
        assert code == EXIT_OK
        lines = (tmp_path / "eigencurve.csv").read_text().splitlines()
        assert lines[0] == "L,lambda1_B0,lambda1_Pf_mean,lambda1_Pf_std"
        assert len(lines) == 4

    def test_outdir_env_fallback(self, tmp_path, monkeypatch):
        monkeypatch.setenv(OUTDIR_ENV, str(tmp_path / "envout"))
        code = run(["sweep", *SMALL_ARGS, "--name", "s"])
        assert code == EXIT_OK
        assert (tmp_path / "envout" / "s.csv").exists()

    def test_bad_flag_value_is_config_error(self, tmp_path, capsys):
        code = run(["sweep", "--beta-grid", "oops", "--out", str(tmp_path)])
        assert code == EXIT_CONFIG


class TestValidate:
    def test_validate_passes(self, capsys):
        assert run(["validate", "--trials", "25", "--seed", "3"]) == EXIT_OK
        assert "passed" in capsys.readouterr().out

    def test_validate_deterministic_for_seed(self, capsys):
        run(["validate", "--trials", "10", "--seed", "5"])
        first = capsys.readouterr().out
        run(["validate", "--trials", "10", "--seed", "5"])
        assert capsys.readouterr().out == first


class TestBounds:
    def test_reports_json(self, capsys):
        code = run([
            "bounds", "--l1b0", "5", "--lnb0", "0.1",
            "--l1pf", "2", "--l1k", "1", "--beta", "0.5",
        ])
        assert code == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        names = {r["theorem"] for r in payload["reports"]}
        assert {"lemma2", "thm4", "thm5", "thm6"} <= names
        assert payload["switch_beta"] == pytest.approx(5.0 / 7.0)
        thm4 = next(r for r in payload["reports"] if r["theorem"] == "thm4")
        assert "Gamma_kappa_B" in thm4["terms"]
        assert "gamma_kappa_B" in thm4["terms"]
        assert "Gamma_lambda_n_B" in thm4["terms"]

    def test_sigma2_r_adds_coro2(self, capsys):
        code = run([
            "bounds", "--l1b0", "5", "--lnb0", "0.1",
            "--l1pf", "2", "--l1k", "1", "--beta", "0.5", "--sigma2-r", "1",
        ])
        assert code == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        names = [r["theorem"] for r in payload["reports"]]
        assert "coro2" in names
        coro2 = next(r for r in payload["reports"] if r["theorem"] == "coro2")
        thm4 = next(r for r in payload["reports"] if r["theorem"] == "thm4")
        assert coro2["lower"] == thm4["lower"]
        assert coro2["upper"] == thm4["upper"]
