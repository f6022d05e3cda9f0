"""Exact truth-table representations of boolean functions.

Conventions used throughout the package:

* Inputs ``x`` are little-endian bitmasks: coordinate 0 is the least
  significant bit and the first character of any serialized bitstring.
* The real (+-1) view of a bit is ``b -> 1 - 2b``, i.e. 0 -> +1, 1 -> -1.
* Exact truth-table operations are capped at arity 24 (2^24 table entries).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

MAX_ARITY = 24


def hamming_weight(x: int) -> int:
    """Population count of a nonnegative integer bitmask."""
    return int(x).bit_count()


def popcounts(masks: np.ndarray) -> np.ndarray:
    """Elementwise population count for an integer array."""
    return np.bitwise_count(masks)


def _check_arity(n: int) -> None:
    if not 1 <= n <= MAX_ARITY:
        raise ValueError(f"arity must be in [1, {MAX_ARITY}], got {n}")


@dataclass(frozen=True)
class BooleanFunction:
    """A boolean function f: {0,1}^n -> {0,1} stored as its full truth table.

    ``table[x]`` is f(x) for x read as a little-endian bitmask.
    """

    n: int
    table: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_arity(self.n)
        table = np.ascontiguousarray(self.table, dtype=np.uint8)
        if table.shape != (1 << self.n,):
            raise ValueError(f"table must have length 2^{self.n}, got shape {table.shape}")
        if table.max(initial=0) > 1:
            raise ValueError("table entries must be bits")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @classmethod
    def from_pm(cls, n: int, values: np.ndarray) -> "BooleanFunction":
        """Build from a +-1 valued table (exact: values must be +-1)."""
        values = np.asarray(values)
        if not np.all(np.abs(values) == 1):
            raise ValueError("values must be exactly +-1")
        return cls(n, ((1 - values) // 2).astype(np.uint8))

    def pm(self) -> np.ndarray:
        """The +-1 real view as float64 (0 -> +1, 1 -> -1)."""
        return 1.0 - 2.0 * self.table.astype(np.float64)

    def evaluate(self, x: int) -> int:
        return int(self.table[x])

    def evaluate_bits(self, bits: Sequence[int]) -> int:
        """Evaluate on a sequence of bits, coordinate 0 first."""
        mask = 0
        for i, b in enumerate(bits):
            mask |= int(b) << i
        return int(self.table[mask])

    def negate(self) -> "BooleanFunction":
        return BooleanFunction(self.n, 1 - self.table)

    def bias(self) -> float:
        """E[f] over uniform inputs, in the {0,1} view."""
        return float(self.table.mean())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.n, self.table.tobytes()))


@dataclass(frozen=True)
class JuntaSpec:
    """An n_total-bit function that depends only on the coordinates in ``subset``."""

    n_total: int
    subset: tuple[int, ...]
    inner: BooleanFunction

    def __post_init__(self):
        if self.n_total < 1:
            raise ValueError("n_total must be positive")
        subset = tuple(int(i) for i in self.subset)
        if len(subset) != self.inner.n:
            raise ValueError("subset size must equal inner arity")
        if len(set(subset)) != len(subset):
            raise ValueError("duplicate coordinate in subset")
        for i in subset:
            if not 0 <= i < self.n_total:
                raise ValueError(f"coordinate {i} out of range [0, {self.n_total})")
        object.__setattr__(self, "subset", subset)

    def evaluate_bits(self, bits: Sequence[int]) -> int:
        """Pointwise evaluation; works for ambient widths beyond the table cap."""
        return self.inner.evaluate_bits([bits[i] for i in self.subset])


@dataclass(frozen=True)
class WeightFunction:
    """A symmetric (weight-based) function: f(x) = s[wt(x)], s of length n+1."""

    n: int
    s: str

    def __post_init__(self):
        _check_arity(self.n)
        if len(self.s) != self.n + 1:
            raise ValueError(f"s must have length n+1 = {self.n + 1}, got {len(self.s)}")
        if set(self.s) - {"0", "1"}:
            raise ValueError("s must be a 0/1 string")

    def profile(self) -> np.ndarray:
        """The weight profile as a uint8 vector of length n+1."""
        return np.frombuffer(self.s.encode(), dtype=np.uint8) - ord("0")


@dataclass(frozen=True)
class LTFSpec:
    """Linear threshold function f(x) = sign(a0 + sum a_i x_i) over the +-1 view.

    A zero argument resolves to +1 (bit 0).
    """

    n: int
    a0: float
    a: tuple[float, ...]

    def __post_init__(self):
        _check_arity(self.n)
        a = tuple(float(v) for v in self.a)
        if len(a) != self.n:
            raise ValueError(f"need {self.n} weights, got {len(a)}")
        object.__setattr__(self, "a", a)


def make_named(family: str, n: int) -> BooleanFunction:
    """Construct a named family: parity, majority, dictator or constant (0).

    Majority uses the wt(x) >= n/2 rule, so even-n majority is imbalanced.
    Dictator outputs coordinate 0.
    """
    _check_arity(n)
    masks = np.arange(1 << n, dtype=np.uint32)
    wts = popcounts(masks)
    if family == "parity":
        table = (wts & 1).astype(np.uint8)
    elif family == "majority":
        table = (2 * wts >= n).astype(np.uint8)
    elif family == "dictator":
        table = (masks & 1).astype(np.uint8)
    elif family == "constant":
        table = np.zeros(1 << n, dtype=np.uint8)
    else:
        raise ValueError(f"unknown family {family!r}")
    return BooleanFunction(n, table)


def expand_junta(spec: JuntaSpec) -> BooleanFunction:
    """Materialize the full truth table of a junta on n_total bits."""
    _check_arity(spec.n_total)
    masks = np.arange(1 << spec.n_total, dtype=np.uint32)
    inner_idx = np.zeros_like(masks)
    for j, coord in enumerate(spec.subset):
        inner_idx |= ((masks >> np.uint32(coord)) & 1) << np.uint32(j)
    return BooleanFunction(spec.n_total, spec.inner.table[inner_idx])


def expand_weight_function(wf: WeightFunction) -> BooleanFunction:
    """Materialize f(x) = s[wt(x)]."""
    wts = popcounts(np.arange(1 << wf.n, dtype=np.uint32))
    return BooleanFunction(wf.n, wf.profile()[wts])


def expand_ltf(spec: LTFSpec) -> BooleanFunction:
    """Materialize a linear threshold function via the +-1 view."""
    masks = np.arange(1 << spec.n, dtype=np.uint32)
    arg = np.full(masks.shape, spec.a0, dtype=np.float64)
    for i, ai in enumerate(spec.a):
        xi = 1.0 - 2.0 * ((masks >> np.uint32(i)) & 1)
        arg += ai * xi
    # sign with ties to +1, i.e. bit 0
    return BooleanFunction(spec.n, (arg < 0).astype(np.uint8))
