from dataclasses import replace

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20260809))


@pytest.fixture(scope="session")
def fig1_sweeps():
    """Both fig1 sweeps (problem, records), computed once per session."""
    from hybridcond.config import get_preset
    from hybridcond.experiments import assemble_problem, run_beta_sweep

    base = get_preset("fig1").base
    out = {}
    for preconditioned in (False, True):
        cfg = replace(base, preconditioned=preconditioned)
        problem = assemble_problem(cfg)
        out[preconditioned] = (problem, run_beta_sweep(cfg, problem=problem))
    return out


def random_spd(gen: np.random.Generator, n: int, cond: float = 1e3) -> np.ndarray:
    """Random SPD matrix with log-uniform spectrum up to `cond`."""
    q, _ = np.linalg.qr(gen.standard_normal((n, n)))
    lam = np.exp(gen.uniform(0.0, np.log(cond), size=n))
    return (q * lam) @ q.T


def random_psd_rank_deficient(gen: np.random.Generator, n: int, rank: int) -> np.ndarray:
    g = gen.standard_normal((n, rank))
    return g @ g.T


def random_symmetric(gen: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    a = gen.standard_normal((n, n)) * scale
    return 0.5 * (a + a.T)
