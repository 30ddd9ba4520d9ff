"""Thermal partition functions and Loschmidt amplitudes as one polynomial L(y).

``y = exp(theta_beta)`` on the positive real axis gives the normalized
partition function; ``y = exp(i theta_t)`` on the unit circle gives the
Loschmidt amplitude.  Zeros of L on the circle are orthogonality times and
logarithmic divergences of the rate function.
"""
from .analytic import (
    ComplexValue,
    cr_correspondence_check,
    early_time_coefficient,
    eval_L,
    eval_on_circle,
    f_dyn,
    f_L,
    f_thermal,
    level_occupations,
    return_probability,
    specific_heat,
)
from .dynamics import (
    fit_divergence,
    first_orthogonality_time,
    rate_function,
    sample_series,
)
from .qsl import energy_stats, ml_bound, mt_bound, qsl_report, scaling_study
from .spectrum import (
    DegenerateQubit,
    DynamicalPartitionFunction,
    IsingOpenChain,
    ProductChain,
    SingleQubit,
    SpectralPolynomial,
    compile_model,
    validate,
)
from .zeros import classify, find_zeros, min_return_probability, predict_critical_times

__version__ = "0.1.0"

__all__ = [
    "classify",
    "compile_model",
    "ComplexValue",
    "cr_correspondence_check",
    "DegenerateQubit",
    "DynamicalPartitionFunction",
    "early_time_coefficient",
    "energy_stats",
    "eval_L",
    "eval_on_circle",
    "f_dyn",
    "f_L",
    "f_thermal",
    "find_zeros",
    "first_orthogonality_time",
    "fit_divergence",
    "IsingOpenChain",
    "level_occupations",
    "min_return_probability",
    "ml_bound",
    "mt_bound",
    "predict_critical_times",
    "ProductChain",
    "qsl_report",
    "rate_function",
    "return_probability",
    "sample_series",
    "scaling_study",
    "SingleQubit",
    "specific_heat",
    "SpectralPolynomial",
    "validate",
]
