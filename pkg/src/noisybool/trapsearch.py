"""Exhaustive search over weight-based (symmetric) functions for traps:
functions whose optimal noisy predictor nearly ties them in noisy error
while being far less sensitive.

Symmetric functions are closed under the iid noise operator, so the search
works entirely on (n+1)-long weight profiles with an (n+1)x(n+1) transition
kernel instead of 2^n truth tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.stats import binom

from .datagen import Dataset, DatasetConfig, generate, lookup_table_baseline
from .noise import TIE_TOLERANCE

TRAP_SEARCH_MAX_ARITY = 16

# Default acceptance thresholds for a "trap". The reference instance
# (n=8, p=0.2, s=000110000) measures err_gap ~ 0.00387 and
# sens_ratio = 0.75 (sens 3.5 -> 2.625), so the ratio threshold sits at
# 0.8 rather than the tighter 0.5 originally considered.
DEFAULT_MAX_ERR_GAP = 0.01
DEFAULT_MAX_SENS_RATIO = 0.8

# the search grid of the original trap construction
TRAP_N_GRID = (4, 5, 6, 7, 8)
TRAP_P_GRID = (0.2, 0.22, 0.24, 0.26, 0.28, 0.30)


def weight_transition_kernel(n: int, p: float) -> np.ndarray:
    """K[w, w'] = Pr(wt(x xor e) = w' | wt(x) = w) under iid rate-p flips.

    The weight change is -D + U with D ~ Bin(w, p) flips of ones and
    U ~ Bin(n - w, p) flips of zeros.
    """
    kernel = np.zeros((n + 1, n + 1), dtype=np.float64)
    for w in range(n + 1):
        down = binom.pmf(np.arange(w + 1), w, p)
        up = binom.pmf(np.arange(n - w + 1), n - w, p)
        for d, pd in enumerate(down):
            for u, pu in enumerate(up):
                kernel[w, w - d + u] += pd * pu
    return kernel


def _weight_fractions(n: int) -> np.ndarray:
    """Pr(wt(X) = w) for uniform X: C(n, w) / 2^n."""
    return np.array([comb(n, w) for w in range(n + 1)], dtype=np.float64) / (1 << n)


def profile_sensitivity(profiles_pm: np.ndarray, n: int) -> np.ndarray:
    """Total influence of symmetric functions given +-1 weight profiles.

    Flipping a bit of an input at weight w moves to weight w-1 (w ways) or
    w+1 (n-w ways); the value changes iff the profile differs across that
    boundary.
    """
    q = _weight_fractions(n)
    boundary = (profiles_pm[..., :-1] != profiles_pm[..., 1:]).astype(np.float64)  # (..., n)
    w = np.arange(n, dtype=np.float64)
    # boundary w separates weights w and w+1: crossed upward by the n-w
    # zero-flips at weight w, downward by the w+1 one-flips at weight w+1
    coeff = (n - w) * q[:-1] + (w + 1) * q[1:]
    return boundary @ coeff


@dataclass(frozen=True)
class TrapCandidate:
    """One weight-based function's exact trap metrics at one bitflip rate."""

    n: int
    p: float
    s: str
    err_f: float
    err_fnstar: float
    sens_f: float
    sens_fnstar: float
    err_gap: float  # err_f - err_fnstar, always >= 0
    sens_ratio: float  # sens_fnstar / sens_f (0 when both vanish)


def analyze_profiles(n: int, p: float, profiles: np.ndarray) -> list[TrapCandidate]:
    """Exact trap metrics for a batch of 0/1 weight profiles (rows)."""
    profiles = np.atleast_2d(np.asarray(profiles, dtype=np.uint8))
    pm = 1.0 - 2.0 * profiles.astype(np.float64)
    kernel = weight_transition_kernel(n, p)
    q = _weight_fractions(n)
    t_f = pm @ kernel.T
    star_pm = np.where(t_f < -TIE_TOLERANCE, -1.0, 1.0)
    t_star = star_pm @ kernel.T
    err_f = (1.0 - np.sum(q * pm * t_f, axis=1)) / 2.0
    err_star = (1.0 - np.sum(q * pm * t_star, axis=1)) / 2.0
    sens_f = profile_sensitivity(pm, n)
    sens_star = profile_sensitivity(star_pm, n)
    out = []
    for j in range(profiles.shape[0]):
        ratio = 0.0 if sens_f[j] == 0.0 and sens_star[j] == 0.0 else float(sens_star[j] / sens_f[j]) if sens_f[j] > 0 else float("inf")
        out.append(
            TrapCandidate(
                n=n,
                p=p,
                s="".join(str(int(b)) for b in profiles[j]),
                err_f=float(err_f[j]),
                err_fnstar=float(err_star[j]),
                sens_f=float(sens_f[j]),
                sens_fnstar=float(sens_star[j]),
                err_gap=float(max(err_f[j] - err_star[j], 0.0)),
                sens_ratio=ratio,
            )
        )
    return out


def _all_profiles(n: int) -> np.ndarray:
    ids = np.arange(1 << (n + 1), dtype=np.uint32)
    return ((ids[:, None] >> np.arange(n + 1, dtype=np.uint32)) & 1).astype(np.uint8)


def trap_search(
    n_grid,
    p_grid,
    max_err_gap: float = DEFAULT_MAX_ERR_GAP,
    max_sens_ratio: float = DEFAULT_MAX_SENS_RATIO,
) -> list[TrapCandidate]:
    """All weight-based functions on the grid with err_gap <= max_err_gap
    and sens_ratio <= max_sens_ratio, sorted by (err_gap, sens_ratio).

    Fully deterministic; the per-(n, p) scan over all 2^(n+1) profiles uses
    the symmetric fast path.
    """
    n_grid, p_grid = list(n_grid), list(p_grid)
    if not n_grid or not p_grid:
        raise ValueError("n_grid and p_grid must be non-empty")
    if max(n_grid) > TRAP_SEARCH_MAX_ARITY:
        raise ValueError(f"search capped at arity {TRAP_SEARCH_MAX_ARITY}")
    hits = []
    for n in n_grid:
        profiles = _all_profiles(n)
        for p in p_grid:
            for cand in analyze_profiles(n, p, profiles):
                if cand.err_gap <= max_err_gap and cand.sens_ratio <= max_sens_ratio:
                    hits.append(cand)
    hits.sort(key=lambda c: (c.err_gap, c.sens_ratio, c.n, c.p, c.s))
    return hits


def finite_sample_vetting(
    candidate: TrapCandidate,
    n_train: int,
    n_val: int,
    master_seed: int,
) -> tuple[float, float]:
    """Train the majority-vote lookup table on a noisy sample of the
    candidate function and report its (train, val) accuracies."""
    if n_train < 1 or n_val < 1:
        raise ValueError("dataset sizes must be >= 1")
    config = DatasetConfig(
        function=f"w:{candidate.s}",
        n_bit=candidate.n + 1,
        p=candidate.p,
        n_train=n_train,
        n_val=n_val,
        master_seed=master_seed,
    )
    train_nl, train_noisy, val_nl, val_noisy = generate(config)
    table = lookup_table_baseline(train_noisy)
    return table.accuracy(train_noisy), table.accuracy(val_noisy)
