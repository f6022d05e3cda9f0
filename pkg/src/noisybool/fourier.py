"""Walsh-Hadamard (Fourier) transform machinery.

Coefficients use the normalized convention f_hat(S) = E_x[f(x) chi_S(x)]
with chi_S(x) = prod_{i in S} x_i in the +-1 view, so Parseval gives
sum_S f_hat(S)^2 = 1 for any +-1 valued function. Subset S is encoded as a
little-endian bitmask, matching the input index convention.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .functions import BooleanFunction, popcounts


def walsh_transform(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis.

    out[m] = sum_x a[x] * (-1)^popcount(m & x). Self-inverse up to a factor
    of the transform length. Summation order within each butterfly stage is
    fixed, so results are bit-identical across runs.
    """
    a = np.array(a, dtype=np.float64)
    m = a.shape[-1]
    if m & (m - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < m:
        shaped = a.reshape(a.shape[:-1] + (m // (2 * h), 2, h))
        x = shaped[..., 0, :].copy()
        y = shaped[..., 1, :].copy()
        shaped[..., 0, :] = x + y
        shaped[..., 1, :] = x - y
        h *= 2
    return a


@dataclass(frozen=True)
class FourierSpectrum:
    """Normalized Walsh coefficients of a function on n bits."""

    n: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        coeffs = np.ascontiguousarray(self.coeffs, dtype=np.float64)
        if coeffs.shape != (1 << self.n,):
            raise ValueError(f"coeffs must have length 2^{self.n}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def to_csv(self) -> str:
        """CSV export with columns mask, subset_size, coefficient."""
        sizes = popcounts(np.arange(1 << self.n, dtype=np.uint32))
        buf = io.StringIO()
        buf.write("mask,subset_size,coefficient\n")
        for mask in range(1 << self.n):
            buf.write(f"{mask},{sizes[mask]},{self.coeffs[mask]!r}\n")
        return buf.getvalue()


def fwht(f: BooleanFunction) -> FourierSpectrum:
    """Fourier spectrum of the +-1 view of f, in O(n 2^n)."""
    return FourierSpectrum(f.n, walsh_transform(f.pm()) / (1 << f.n))


def inverse_fwht(spec: FourierSpectrum, tolerance: float = 1e-6) -> BooleanFunction:
    """Sign-rounded reconstruction of a boolean function from its spectrum.

    Raises ValueError if any reconstructed value is farther than
    ``tolerance`` from +-1 (the spectrum is not that of a boolean function).
    """
    values = walsh_transform(spec.coeffs)
    if np.max(np.abs(np.abs(values) - 1.0)) > tolerance:
        raise ValueError("spectrum does not reconstruct to a +-1 valued function")
    return BooleanFunction(spec.n, (values < 0).astype(np.uint8))


def apply_noise_filter(spec: FourierSpectrum, filter: np.ndarray) -> FourierSpectrum:
    """Multiply each coefficient by a per-mask real factor."""
    filter = np.asarray(filter, dtype=np.float64)
    if filter.shape != spec.coeffs.shape:
        raise ValueError("filter length must equal 2^n")
    return FourierSpectrum(spec.n, spec.coeffs * filter)


def total_influence_fourier(spec: FourierSpectrum) -> float:
    """Total influence sum_S |S| f_hat(S)^2."""
    sizes = popcounts(np.arange(1 << spec.n, dtype=np.uint32))
    return float(np.dot(sizes.astype(np.float64), spec.coeffs**2))
