"""Monte-Carlo sensitivity of an arbitrary 0/1 predictor.

sens[f] = n * Pr(f(x) != f(x with one uniformly random bit flipped)) for
uniform x; the estimator below samples that probability directly, so it is
unbiased for any fixed predictor.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

Predictor = Callable[[np.ndarray], np.ndarray]  # (rows, n) uint8 -> (rows,) 0/1


def model_sensitivity(
    predict: Predictor, n_inputs: int, n_probe: int, rng: np.random.Generator
) -> float:
    if n_probe <= 0:
        raise ValueError("n_probe must be positive")
    x = rng.integers(0, 2, size=(n_probe, n_inputs), dtype=np.uint8)
    flipped = x.copy()
    which = rng.integers(0, n_inputs, size=n_probe)
    rows = np.arange(n_probe)
    flipped[rows, which] ^= 1
    disagree = np.asarray(predict(x)) != np.asarray(predict(flipped))
    return n_inputs * float(np.mean(disagree))
