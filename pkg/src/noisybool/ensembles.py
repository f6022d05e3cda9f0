"""Random-function and random-junta ensembles.

Monte-Carlo verification of the arccos law for the mean sensitivity of the
optimal noisy predictor, and the sensitivity scatter over random juntas.
Sample i of every loop draws from substream(master_seed, i), so output is
bit-exact reproducible and independent of scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .functions import BooleanFunction, JuntaSpec, expand_junta
from .fourier import walsh_transform
from .noise import TIE_TOLERANCE, NoiseModel, noisy_error, optimal_predictor, sensitivity
from .rng import substream


def sheppard_quadrant(r: float) -> float:
    """Quadrant probability Pr(a1 <= 0, a2 <= 0) for standard bivariate
    Gaussians with correlation r: (1 - arccos(r)/pi) / 2."""
    if not -1.0 <= r <= 1.0:
        raise ValueError(f"correlation must be in [-1, 1], got {r}")
    return 0.5 * (1.0 - math.acos(r) / math.pi)


def predictor_sensitivity_theory(n: int, p: float) -> float:
    """Asymptotic mean sensitivity of the optimal predictor for a uniformly
    random function: (n/pi) arccos(r) with r = (1-rho^2)/(1+rho^2)."""
    rho = 1.0 - 2.0 * p
    r = (1.0 - rho**2) / (1.0 + rho**2)
    return (n / math.pi) * math.acos(r)


def sample_random_function(n: int, rng: np.random.Generator) -> BooleanFunction:
    """A uniformly random boolean function: each table bit a fair coin."""
    return BooleanFunction(n, rng.integers(0, 2, size=1 << n, dtype=np.uint8))


def sample_random_junta(n_total: int, k: int, rng: np.random.Generator) -> JuntaSpec:
    """Uniform random sorted k-subset of coordinates plus a uniform random
    inner function."""
    if not 1 <= k <= n_total:
        raise ValueError("need 1 <= k <= n_total")
    subset = tuple(sorted(int(i) for i in rng.choice(n_total, size=k, replace=False)))
    return JuntaSpec(n_total, subset, sample_random_function(k, rng))


def _batch_fnstar_pm(tables_pm: np.ndarray, p: float) -> np.ndarray:
    """Optimal-predictor +-1 tables for a batch of +-1 truth tables."""
    m = tables_pm.shape[-1]
    n = m.bit_length() - 1
    filt = NoiseModel.iid(p).fourier_filter(n)
    t_tables = walsh_transform(walsh_transform(tables_pm) / m * filt)
    return np.where(t_tables < -TIE_TOLERANCE, -1.0, 1.0)


def _batch_total_sensitivity(tables_pm: np.ndarray) -> np.ndarray:
    """Total influence for each row of a batch of +-1 truth tables."""
    m = tables_pm.shape[-1]
    n = m.bit_length() - 1
    idx = np.arange(m, dtype=np.uint32)
    total = np.zeros(tables_pm.shape[:-1], dtype=np.float64)
    for i in range(n):
        total += np.mean(tables_pm != tables_pm[..., idx ^ np.uint32(1 << i)], axis=-1)
    return total


@dataclass(frozen=True)
class Prop2Estimate:
    """Monte-Carlo estimate of the mean predictor sensitivity versus the
    arccos-law theory value."""

    n: int
    p: float
    samples: int
    mean_sens_fnstar: float
    std_err: float
    theory: float
    mean_sens_f: float


def prop2_monte_carlo(n: int, p: float, samples: int, master_seed: int) -> Prop2Estimate:
    """Sample `samples` uniform random functions and compare the mean
    sensitivity of their optimal predictors against the arccos law."""
    if n > 14:
        raise ValueError("capped at arity 14 (full transform per sample)")
    if samples < 1:
        raise ValueError("need at least one sample")
    tables = np.stack(
        [sample_random_function(n, substream(master_seed, i)).pm() for i in range(samples)]
    )
    sens_f = _batch_total_sensitivity(tables)
    sens_star = _batch_total_sensitivity(_batch_fnstar_pm(tables, p))
    mean = float(sens_star.mean())
    std_err = float(sens_star.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return Prop2Estimate(
        n=n,
        p=p,
        samples=samples,
        mean_sens_fnstar=mean,
        std_err=std_err,
        theory=predictor_sensitivity_theory(n, p),
        mean_sens_f=float(sens_f.mean()),
    )


@dataclass(frozen=True)
class ScatterRecord:
    """One random junta's exact sensitivity and error pair under one rate."""

    function_id: str
    k: int
    p: float
    sens_f: float
    sens_fnstar: float
    err_f_f: float
    err_f_fnstar: float


# the bitflip-rate grid of the random-junta scatter experiment
JUNTA_SCAN_P_GRID = (0.0, 0.05, 0.08, 0.10, 0.13, 0.16, 0.18, 0.2, 0.22, 0.24, 0.26, 0.28, 0.3)


def junta_scan(
    count: int,
    n_total: int,
    k_choices,
    p_grid,
    master_seed: int,
) -> list[ScatterRecord]:
    """Sample `count` random juntas with k and p drawn uniformly from the
    given choices; report exact sensitivities and errors for each."""
    k_choices = list(k_choices)
    p_grid = list(p_grid)
    if not k_choices or not p_grid:
        raise ValueError("k_choices and p_grid must be non-empty")
    records = []
    for i in range(count):
        rng = substream(master_seed, i)
        k = int(rng.choice(k_choices))
        p = float(rng.choice(p_grid))
        f = expand_junta(sample_random_junta(n_total, k, rng))
        noise = NoiseModel.iid(p)
        fnstar = optimal_predictor(f, noise)
        records.append(
            ScatterRecord(
                function_id=f"{master_seed}-{i}",
                k=k,
                p=p,
                sens_f=sensitivity(f).total,
                sens_fnstar=sensitivity(fnstar).total,
                err_f_f=noisy_error(f, f, noise),
                err_f_fnstar=noisy_error(f, fnstar, noise),
            )
        )
    return records
