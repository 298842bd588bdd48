"""Figure-level behaviours beyond the acceptance criteria: bound-family
agreement, observation-variant conditioning order, variance scaling of the
switch point, the near-singular edge of the unpreconditioned assembly, and
the size of the CVT conditioning improvement."""

import math
from dataclasses import replace

import numpy as np
import pytest

from hybridcond.config import get_preset
from hybridcond.covariance import hybrid_B
from hybridcond.experiments import assemble_problem, run_beta_sweep
from hybridcond.hessian import assemble_unpreconditioned


class TestFig1Behaviours:
    def test_thm3_and_thm4_uppers_within_one_order(self, fig1_sweeps):
        _, records = fig1_sweeps[False]
        gaps = [
            abs(math.log10(r.reports["thm3"].upper) - math.log10(r.reports["thm4"].upper))
            for r in records
            if math.isfinite(r.kappa_exact)
        ]
        assert max(gaps) <= 1.0

    def test_unpreconditioned_spd_up_to_beta_0999(self, fig1_sweeps):
        problem, _ = fig1_sweeps[False]
        S = assemble_unpreconditioned(hybrid_B(problem.B0, problem.Pf, 0.999), problem.K)
        assert np.linalg.eigvalsh(S.data)[0] > 0

    def test_cvt_improves_conditioning_by_orders_of_magnitude(self, fig1_sweeps):
        _, unprec = fig1_sweeps[False]
        _, prec = fig1_sweeps[True]
        k_u = unprec[-1].kappa_exact  # beta = 0.99
        k_p = max(r.kappa_exact for r in prec)
        assert k_u / k_p > 1e6


@pytest.fixture(scope="module")
def variant_sweeps():
    base = replace(get_preset("fig4").base, beta_grid=tuple(np.linspace(0.0, 0.9, 7)))
    return {v: run_beta_sweep(replace(base, H_variant=v)) for v in (1, 2, 3, 4)}


class TestObservationVariantOrdering:
    def test_upper_bound_identical_for_selection_variants(self, variant_sweeps):
        uppers = {
            v: np.array([r.reports["thm4"].upper for r in recs])
            for v, recs in variant_sweeps.items()
        }
        assert np.allclose(uppers[1], uppers[2], rtol=1e-12, atol=0.0)
        assert np.allclose(uppers[1], uppers[4], rtol=1e-12, atol=0.0)

    def test_concentrated_observations_condition_worst(self, variant_sweeps):
        # first-p placement concentrates all observations in one arc and
        # yields the largest condition number at every grid point; spread
        # placements (every-nth, five-point) condition best, random between
        kappas = {
            v: np.array([r.kappa_exact for r in recs]) for v, recs in variant_sweeps.items()
        }
        for v in (2, 3, 4):
            assert np.all(kappas[1] >= kappas[v] * (1 - 1e-9))
        assert np.all(kappas[4] >= kappas[2] * (1 - 1e-9))


class TestEnsembleVarianceScaling:
    def test_ensemble_covariance_scales_exactly_with_variance(self):
        cfg = replace(get_preset("fig5").base, n=120, m=24, p=24)
        base = assemble_problem(cfg)
        doubled = assemble_problem(replace(cfg, sigma2_Pf=2.0))
        # same seed: X_f scales by sqrt(sigma2), so lambda_1(P_f) is exactly linear
        assert doubled.l1Pf == pytest.approx(2.0 * base.l1Pf, rel=1e-12)

    def test_switch_point_moves_left_as_ensemble_variance_grows(self):
        cfg = replace(get_preset("fig5").base, n=120, m=24, p=24)
        switches = [
            assemble_problem(replace(cfg, sigma2_Pf=s2)).switch_beta
            for s2 in (0.7, 1.0, 1.4)
        ]
        assert switches[0] > switches[1] > switches[2]

    def test_preconditioned_endpoint_kappa_orders_with_variance(self):
        cfg = replace(
            get_preset("fig5").base, n=120, m=24, p=24, beta_grid=(1.0,)
        )
        endpoint = []
        for s2 in (0.7, 1.0, 1.4):
            (rec,) = run_beta_sweep(replace(cfg, sigma2_Pf=s2))
            endpoint.append(rec.kappa_exact)
        assert endpoint[0] < endpoint[1] < endpoint[2]


class TestMultiTimeObservations:
    def test_propagated_setup_flows_through_bounds(self):
        # two observation times linked by a rotation propagator: K keeps its
        # PSD structure and the component bounds still sandwich kappa(S)
        from hybridcond.bounds import bounds_thm4
        from hybridcond.covariance import (
            GridGeometry,
            build_soar,
            build_static_B,
            ensemble_covariance,
            sample_ensemble_factor,
        )
        from hybridcond.observation import ObservationSetup, build_H, build_K, build_R

        n, m, p = 40, 8, 10
        geom = GridGeometry(n)
        B0 = build_static_B(geom, 0.6, 1.0)
        Pf = ensemble_covariance(sample_ensemble_factor(build_soar(geom, 0.4), m, seed=5))
        H0 = build_H(1, n, p).matrix
        H1 = build_H(2, n, p).matrix
        shift = np.roll(np.eye(n), 3, axis=1)  # advection by three grid points
        setup = ObservationSetup(
            operators=((H0, build_R(p, 1.0)), (H1, build_R(p, 0.5))),
            propagators=(np.eye(n), shift),
        )
        K = build_K(setup)
        wK = np.linalg.eigvalsh(K)
        assert wK[0] >= -1e-12 * wK[-1]
        assert np.sum(wK > 1e-10 * wK[-1]) <= 2 * p

        beta = 0.4
        S = assemble_unpreconditioned(hybrid_B(B0, Pf, beta), K)
        wS = np.linalg.eigvalsh(S.data)
        kappa = wS[-1] / wS[0]
        w0 = np.linalg.eigh(B0.data)[0]
        l1Pf = np.linalg.eigvalsh(Pf.data)[-1]
        rep = bounds_thm4(w0[-1], w0[0], l1Pf, wK[-1], beta)
        assert rep.lower * (1 - 1e-9) <= kappa <= rep.upper * (1 + 1e-9)


class TestCgToleranceProfiles:
    def test_preconditioned_profiles_flat_and_ordered_in_tolerance(self):
        from hybridcond.experiments import cg_sweep

        cfg = get_preset("fig8").base
        rows = cg_sweep(cfg, tol_grid=(1e-4, 1e-6, 1e-8))
        by_tol = {}
        for row in rows:
            by_tol.setdefault(row["tol"], []).append(row["iterations"])
        # loose tolerances: iteration counts barely vary across beta
        for tol, its in by_tol.items():
            assert max(its) - min(its) <= 5, (tol, its)
        # stricter tolerance never costs fewer iterations at any beta
        for looser, stricter in ((1e-4, 1e-6), (1e-6, 1e-8)):
            pairs = zip(by_tol[looser], by_tol[stricter])
            assert all(b >= a for a, b in pairs)
