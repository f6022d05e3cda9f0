"""Noise models, optimal noisy predictors, exact error/entropy, sensitivity.

Everything here is computed exactly (closed-form sums over the truth table
or the Fourier spectrum); no sampling. Noise is always additive in GF(2):
Z = X xor E with E independent of X, so the posterior p_{X|Z}(x|z) equals
p_E(x xor z) and the same convolution serves both directions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .functions import BooleanFunction, LTFSpec, expand_ltf, popcounts
from .fourier import FourierSpectrum, fwht, total_influence_fourier, walsh_transform

TIE_TOLERANCE = 1e-12

GENERAL_NOISE_MAX_ARITY = 14
BRUTE_FORCE_MAX_ARITY = 3


@dataclass(frozen=True)
class NoiseModel:
    """Bitflip noise: iid rate p, independent per-bit rates, or a general
    error distribution over {0,1}^n.

    Use the ``iid``, ``independent`` and ``general`` constructors.
    """

    kind: str
    p: float | None = None
    p_vec: tuple[float, ...] | None = None
    p_error: np.ndarray | None = None

    @classmethod
    def iid(cls, p: float) -> "NoiseModel":
        if not 0.0 <= p <= 0.5:
            raise ValueError(f"bitflip rate must be in [0, 0.5], got {p}")
        return cls(kind="iid", p=float(p))

    @classmethod
    def independent(cls, p_vec) -> "NoiseModel":
        p_vec = tuple(float(p) for p in p_vec)
        for p in p_vec:
            if not 0.0 <= p <= 0.5:
                raise ValueError(f"bitflip rate must be in [0, 0.5], got {p}")
        return cls(kind="independent", p_vec=p_vec)

    @classmethod
    def general(cls, p_error) -> "NoiseModel":
        p_error = np.ascontiguousarray(p_error, dtype=np.float64)
        m = p_error.shape[0]
        if p_error.ndim != 1 or m & (m - 1) or m < 2:
            raise ValueError("p_error must have length 2^n")
        if p_error.min() < 0 or abs(p_error.sum() - 1.0) > 1e-12:
            raise ValueError("p_error must be a probability distribution")
        p_error.setflags(write=False)
        return cls(kind="general", p_error=p_error)

    @property
    def rho(self) -> float:
        if self.kind != "iid":
            raise ValueError("rho is defined for iid noise only")
        return 1.0 - 2.0 * self.p

    def _check_arity(self, n: int) -> None:
        if self.kind == "independent" and len(self.p_vec) != n:
            raise ValueError(f"noise model has {len(self.p_vec)} rates, function has arity {n}")
        if self.kind == "general":
            if self.p_error.shape[0] != (1 << n):
                raise ValueError("p_error length does not match arity")
            if n > GENERAL_NOISE_MAX_ARITY:
                raise ValueError(f"general noise capped at arity {GENERAL_NOISE_MAX_ARITY}")

    def fourier_filter(self, n: int) -> np.ndarray:
        """Per-mask attenuation of the noise operator in the Fourier domain.

        iid: rho^|S|; independent: prod_{i in S} rho_i; general: the
        character sum E_e[chi_S(e)] of the error distribution.
        """
        self._check_arity(n)
        if self.kind == "iid":
            sizes = popcounts(np.arange(1 << n, dtype=np.uint32))
            return self.rho ** sizes.astype(np.float64)
        if self.kind == "independent":
            filt = np.ones(1, dtype=np.float64)
            for p_i in self.p_vec:
                filt = np.concatenate([filt, filt * (1.0 - 2.0 * p_i)])
            return filt
        return walsh_transform(self.p_error)


def noise_operator(f: BooleanFunction, noise: NoiseModel) -> np.ndarray:
    """(T f)(x) = E[f_pm(Z) | X = x] as a real table over all 2^n inputs."""
    spec = fwht(f)
    filtered = spec.coeffs * noise.fourier_filter(f.n)
    return walsh_transform(filtered)


def noise_operator_direct(f: BooleanFunction, noise: NoiseModel) -> np.ndarray:
    """O(4^n) summation oracle for the noise operator; test use only."""
    n = f.n
    masks = np.arange(1 << n, dtype=np.uint32)
    if noise.kind == "general":
        p_e = noise.p_error
    else:
        rates = np.full(n, noise.p) if noise.kind == "iid" else np.array(noise.p_vec)
        p_e = np.ones(1 << n, dtype=np.float64)
        for i in range(n):
            bit = (masks >> np.uint32(i)) & 1
            p_e *= np.where(bit == 1, rates[i], 1.0 - rates[i])
    fpm = f.pm()
    out = np.empty(1 << n, dtype=np.float64)
    for x in range(1 << n):
        out[x] = float(np.dot(p_e, fpm[masks ^ np.uint32(x)]))
    return out


def _sign_to_bits(values: np.ndarray) -> np.ndarray:
    """Sign rounding with ties (|v| <= TIE_TOLERANCE) resolving to bit 0."""
    return (values < -TIE_TOLERANCE).astype(np.uint8)


def optimal_predictor(f: BooleanFunction, noise: NoiseModel) -> BooleanFunction:
    """The Bayes-optimal predictor for labels f(X) observed through noise:
    the pointwise sign of the noise-operator table."""
    return BooleanFunction(f.n, _sign_to_bits(noise_operator(f, noise)))


def noisy_error(f: BooleanFunction, g: BooleanFunction, noise: NoiseModel) -> float:
    """Pr(g(Z) != f(X)), exactly: (1 - sum_S filter[S] f_hat(S) g_hat(S)) / 2."""
    if f.n != g.n:
        raise ValueError("arity mismatch")
    filt = noise.fourier_filter(f.n)
    corr = float(np.dot(fwht(f).coeffs * filt, fwht(g).coeffs))
    return (1.0 - corr) / 2.0


@dataclass(frozen=True)
class SensitivityResult:
    total: float
    per_bit: np.ndarray
    pointwise: np.ndarray


def sensitivity(f: BooleanFunction) -> SensitivityResult:
    """Pointwise sensitivity s(f, x), per-bit influences, and total influence."""
    idx = np.arange(1 << f.n, dtype=np.uint32)
    pointwise = np.zeros(1 << f.n, dtype=np.int64)
    per_bit = np.empty(f.n, dtype=np.float64)
    for i in range(f.n):
        diff = f.table != f.table[idx ^ np.uint32(1 << i)]
        per_bit[i] = diff.mean()
        pointwise += diff
    return SensitivityResult(float(per_bit.sum()), per_bit, pointwise)


def binary_entropy(q) -> np.ndarray | float:
    """h2(q) in bits, with 0 log 0 = 0."""
    q = np.asarray(q, dtype=np.float64)
    out = np.zeros_like(q)
    inner = (q > 0) & (q < 1)
    qi = q[inner]
    out[inner] = -qi * np.log2(qi) - (1 - qi) * np.log2(1 - qi)
    return out if out.ndim else float(out)


def conditional_entropy(f: BooleanFunction, noise: NoiseModel) -> float:
    """H(Y|Z) in bits for Y = f(X), Z = X xor E.

    Pr(Y=1 | Z=z) = (1 - (T f)(z)) / 2: the posterior convolution equals the
    forward one because p_{X|Z}(x|z) = p_E(x xor z).
    """
    posterior_one = (1.0 - noise_operator(f, noise)) / 2.0
    # clip away roundoff outside [0, 1]
    posterior_one = np.clip(posterior_one, 0.0, 1.0)
    return float(np.mean(binary_entropy(posterior_one)))


def feder_bounds(entropy_bits: float, n_alphabet: int = 2) -> tuple[float, float]:
    """Two-sided bounds on the optimal prediction error from H(Y|Z).

    Returns (lower, upper) with lower the Fano-type inverse of
    h2(lam) + lam log2(N-1) (numeric bisection) and upper the closed-form
    inverse of the piecewise-linear function with slopes
    a_k = k(k+1) log2((k+1)/k).
    """
    if n_alphabet < 2:
        raise ValueError("alphabet size must be >= 2")
    max_h = math.log2(n_alphabet)
    if not -1e-12 <= entropy_bits <= max_h + 1e-12:
        raise ValueError(f"entropy must be in [0, {max_h}], got {entropy_bits}")
    entropy_bits = min(max(entropy_bits, 0.0), max_h)
    lam_max = (n_alphabet - 1) / n_alphabet

    def big_phi(lam: float) -> float:
        return float(binary_entropy(lam)) + lam * math.log2(n_alphabet - 1)

    # lower bound: invert the increasing branch of big_phi by bisection;
    # the entropy maximum is handled exactly (big_phi is flat there and
    # bisection would stall at sqrt(eps) accuracy)
    if entropy_bits >= max_h:
        return lam_max, lam_max
    lo, hi = 0.0, lam_max
    for _ in range(200):
        mid = (lo + hi) / 2
        if big_phi(mid) < entropy_bits:
            lo = mid
        else:
            hi = mid
    lower = (lo + hi) / 2
    if hi - lo > 1e-10:
        raise RuntimeError("bisection failed to converge")

    # upper bound: closed-form inverse of the piecewise-linear function
    if entropy_bits >= max_h:
        upper = lam_max
    else:
        k = max(1, min(n_alphabet - 1, int(math.floor(2**entropy_bits))))
        if entropy_bits < math.log2(k):
            k -= 1
        a_k = k * (k + 1) * math.log2((k + 1) / k)
        upper = (k - 1) / k + (entropy_bits - math.log2(k)) / a_k
    return lower, upper


def is_self_predicting(f: BooleanFunction, noise: NoiseModel) -> bool:
    """True iff f_pm(z) * (T f)(z) >= 0 everywhere: the pointwise sufficient
    condition for f itself to be an optimal noisy predictor."""
    return bool(np.all(f.pm() * noise_operator(f, noise) >= -TIE_TOLERANCE))


def ltf_counterexample_check(spec: LTFSpec, rho: float) -> tuple[float, float, bool]:
    """Sensitivities of an LTF and of its optimal predictor under iid noise
    with correlation rho; flags whether sens[f_N*] > sens[f]."""
    if not 0.0 < rho <= 1.0:
        raise ValueError("rho must be in (0, 1]")
    f = expand_ltf(spec)
    noise = NoiseModel.iid((1.0 - rho) / 2.0)
    sens_f = sensitivity(f).total
    sens_fnstar = sensitivity(optimal_predictor(f, noise)).total
    return sens_f, sens_fnstar, sens_fnstar > sens_f


def brute_force_optimality_check(f: BooleanFunction, noise: NoiseModel) -> bool:
    """Exhaustive oracle: does the optimal predictor beat every candidate g?

    Enumerates all 2^(2^n) functions, so n <= 3.
    """
    if f.n > BRUTE_FORCE_MAX_ARITY:
        raise ValueError(f"exhaustive check capped at arity {BRUTE_FORCE_MAX_ARITY}")
    m = 1 << f.n
    tf = noise_operator(f, noise)
    g_ids = np.arange(1 << m, dtype=np.uint32)
    g_tables = (g_ids[:, None] >> np.arange(m, dtype=np.uint32)) & 1
    g_pm = 1.0 - 2.0 * g_tables.astype(np.float64)
    errs = (1.0 - g_pm @ tf / m) / 2.0
    err_star = noisy_error(f, optimal_predictor(f, noise), noise)
    return bool(err_star <= errs.min() + 1e-12)


@dataclass(frozen=True)
class AnalysisReport:
    """Exact noisy-prediction analytics for one (function, noise) pair."""

    err_f_f: float
    err_f_fnstar: float
    sens_f: float
    sens_fnstar: float
    influences_f: tuple[float, ...]
    cond_entropy_bits: float
    feder_lower: float
    feder_upper: float
    self_predicting: bool

    def to_dict(self) -> dict:
        return {
            "err_f_f": self.err_f_f,
            "err_f_fnstar": self.err_f_fnstar,
            "sens_f": self.sens_f,
            "sens_fnstar": self.sens_fnstar,
            "influences_f": list(self.influences_f),
            "cond_entropy_bits": self.cond_entropy_bits,
            "feder_lower": self.feder_lower,
            "feder_upper": self.feder_upper,
            "self_predicting": self.self_predicting,
        }


def analyze(f: BooleanFunction, noise: NoiseModel) -> AnalysisReport:
    """Full report: errors, sensitivities, entropy and the error bounds."""
    fnstar = optimal_predictor(f, noise)
    sens_f = sensitivity(f)
    entropy = conditional_entropy(f, noise)
    lower, upper = feder_bounds(entropy)
    return AnalysisReport(
        err_f_f=noisy_error(f, f, noise),
        err_f_fnstar=noisy_error(f, fnstar, noise),
        sens_f=sens_f.total,
        sens_fnstar=sensitivity(fnstar).total,
        influences_f=tuple(float(v) for v in sens_f.per_bit),
        cond_entropy_bits=entropy,
        feder_lower=lower,
        feder_upper=upper,
        self_predicting=is_self_predicting(f, noise),
    )


__all__ = [
    "NoiseModel",
    "AnalysisReport",
    "SensitivityResult",
    "noise_operator",
    "noise_operator_direct",
    "optimal_predictor",
    "noisy_error",
    "sensitivity",
    "binary_entropy",
    "conditional_entropy",
    "feder_bounds",
    "is_self_predicting",
    "ltf_counterexample_check",
    "brute_force_optimality_check",
    "analyze",
    "total_influence_fourier",
]
