"""Boolean functions under feature noise: exact analytics, ensembles, datasets."""

__version__ = "0.1.0"

from .functions import (
    BooleanFunction,
    JuntaSpec,
    LTFSpec,
    WeightFunction,
    expand_junta,
    expand_ltf,
    expand_weight_function,
    hamming_weight,
    make_named,
)
from .fourier import FourierSpectrum, apply_noise_filter, fwht, inverse_fwht, total_influence_fourier
from .noise import (
    AnalysisReport,
    NoiseModel,
    analyze,
    brute_force_optimality_check,
    conditional_entropy,
    feder_bounds,
    is_self_predicting,
    ltf_counterexample_check,
    noise_operator,
    noisy_error,
    optimal_predictor,
    sensitivity,
)

__all__ = [
    "BooleanFunction",
    "JuntaSpec",
    "WeightFunction",
    "LTFSpec",
    "make_named",
    "expand_junta",
    "expand_weight_function",
    "expand_ltf",
    "hamming_weight",
    "FourierSpectrum",
    "fwht",
    "inverse_fwht",
    "apply_noise_filter",
    "total_influence_fourier",
    "NoiseModel",
    "AnalysisReport",
    "noise_operator",
    "optimal_predictor",
    "noisy_error",
    "sensitivity",
    "conditional_entropy",
    "feder_bounds",
    "is_self_predicting",
    "ltf_counterexample_check",
    "brute_force_optimality_check",
    "analyze",
]
