"""Text literals describing boolean functions, shared by files and the CLI.

Supported forms:

* ``parity:4``, ``maj:5``, ``majority:5``, ``dictator:3``, ``constant:3``
* sparse variants ``parity:20:4`` / ``maj:20:5`` (random subset, needs a
  seeded rng) or ``maj:20:5:0,3,7,9,12`` (explicit subset)
* ``w:000110000`` -- weight-based function, profile of length n+1
* ``ltf:0.3,0.1,0.1,0.2,0.3,0.4,0.9`` -- a0 followed by n weights
* ``tt:4:0x6996`` -- raw truth table, bit x of the integer is f(x)
* ``embed:14:random:w:000110000`` / ``embed:14:1,2,5:<literal>`` -- junta
  embedding of an inner literal into a wider ambient string
"""

from __future__ import annotations

import numpy as np

from .rng import substream
from .functions import (
    BooleanFunction,
    JuntaSpec,
    LTFSpec,
    WeightFunction,
    expand_ltf,
    expand_weight_function,
    make_named,
)

_FAMILIES = {"parity": "parity", "maj": "majority", "majority": "majority", "dictator": "dictator", "constant": "constant"}


def arity_of(func) -> int:
    """Ambient arity of a parsed function object."""
    return func.n_total if isinstance(func, JuntaSpec) else func.n


def _random_subset(n_total: int, k: int, rng: np.random.Generator | None) -> tuple[int, ...]:
    if rng is None:
        raise ValueError("literal needs a random subset but no seed was provided")
    return tuple(sorted(int(i) for i in rng.choice(n_total, size=k, replace=False)))


def parse_literal(text: str, rng: np.random.Generator | None = None):
    """Parse a function literal to a BooleanFunction or JuntaSpec.

    ``rng`` supplies the subset choice for seeded sparse/embedded forms.
    """
    parts = text.split(":")
    head = parts[0]

    if head in _FAMILIES:
        family = _FAMILIES[head]
        if len(parts) == 2:
            return make_named(family, int(parts[1]))
        if len(parts) in (3, 4):
            n_total, k = int(parts[1]), int(parts[2])
            if len(parts) == 4:
                subset = tuple(int(i) for i in parts[3].split(","))
            else:
                subset = _random_subset(n_total, k, rng)
            return JuntaSpec(n_total, subset, make_named(family, k))
        raise ValueError(f"malformed literal {text!r}")

    if head == "w" and len(parts) == 2:
        return expand_weight_function(WeightFunction(len(parts[1]) - 1, parts[1]))

    if head == "ltf" and len(parts) == 2:
        values = [float(v) for v in parts[1].split(",")]
        if len(values) < 2:
            raise ValueError("ltf literal needs a0 plus at least one weight")
        return expand_ltf(LTFSpec(len(values) - 1, values[0], tuple(values[1:])))

    if head == "tt" and len(parts) == 3:
        n = int(parts[1])
        packed = int(parts[2], 16)
        if packed >= 1 << (1 << n):
            raise ValueError("truth-table integer too large for the stated arity")
        table = np.array([(packed >> x) & 1 for x in range(1 << n)], dtype=np.uint8)
        return BooleanFunction(n, table)

    if head == "embed" and len(parts) >= 4:
        n_total = int(parts[1])
        inner = parse_literal(":".join(parts[3:]), rng)
        if isinstance(inner, JuntaSpec):
            raise ValueError("cannot embed an already-embedded literal")
        if parts[2] == "random":
            subset = _random_subset(n_total, inner.n, rng)
        else:
            subset = tuple(int(i) for i in parts[2].split(","))
        return JuntaSpec(n_total, subset, inner)

    raise ValueError(f"unrecognized function literal {text!r}")


# substream key reserved for literal subset choices; shared by every consumer
# so a (literal, master_seed) pair always denotes the same function
SUBSET_STREAM_KEY = 2


def parse_literal_seeded(text: str, master_seed: int | None = None):
    """Parse a literal, drawing any random subset from the dedicated
    substream of ``master_seed``."""
    rng = substream(master_seed, SUBSET_STREAM_KEY) if master_seed is not None else None
    return parse_literal(text, rng)
