"""Reproducible randomness with splittable substreams.

All randomness in this package flows through ``substream``: a counter-based
Philox generator keyed by the master seed and an integer substream key.
Sample i of any Monte-Carlo loop draws from ``substream(master_seed, i)``,
so results are bit-exact across platforms and independent of worker count.
"""

from __future__ import annotations

import numpy as np


def substream(master_seed: int, *key: int) -> np.random.Generator:
    """A generator for one substream of the master seed.

    Distinct keys give statistically independent streams; the same
    (seed, key) pair always yields the identical stream.
    """
    ss = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
