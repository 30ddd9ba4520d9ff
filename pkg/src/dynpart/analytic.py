"""Evaluation of L(y) = base(y)**M along the real axis and the unit circle.

Thermal quantities use ``y = exp(theta_beta)``; dynamical ones use
``y = exp(i theta_t)``.  Free energies are per degree of freedom, so they
depend on the base polynomial only.  An exact zero of L is carried as an
explicit marker (``log_abs = -inf``, free energies ``inf``), never as a
large finite number.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import StepTooLarge
from .spectrum import DynamicalPartitionFunction
from .zeros import TWO_PI, critical_angles

ZERO_ABS_TOL = 1e-300
CRITICAL_SNAP = 1e-12
MAX_CR_STEP = 1e-2


@dataclass(frozen=True)
class ComplexValue:
    """A complex number held as (log-magnitude, phase).

    ``log_abs == -inf`` is the exact-zero marker.
    """

    log_abs: float
    phase: float

    @classmethod
    def from_complex(cls, z) -> "ComplexValue":
        z = complex(z)
        if abs(z) <= ZERO_ABS_TOL:
            return cls.zero()
        return cls(math.log(abs(z)), cmath.phase(z))

    @classmethod
    def zero(cls) -> "ComplexValue":
        return cls(-math.inf, 0.0)

    @property
    def is_zero(self) -> bool:
        return self.log_abs == -math.inf

    @property
    def re(self) -> float:
        return 0.0 if self.is_zero else math.exp(self.log_abs) * math.cos(self.phase)

    @property
    def im(self) -> float:
        return 0.0 if self.is_zero else math.exp(self.log_abs) * math.sin(self.phase)

    def __abs__(self) -> float:
        return math.exp(self.log_abs)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)


@dataclass(frozen=True)
class CRReport:
    d2_real_axis: float
    d2_circle: float
    defect: float
    step: float


def _wrap(phase: float) -> float:
    return math.remainder(phase, TWO_PI)


def _circle_point(theta: float) -> complex:
    return complex(math.cos(theta), math.sin(theta))


def is_critical(dpf: DynamicalPartitionFunction, theta: float, snap: float = CRITICAL_SNAP) -> bool:
    """True when ``theta`` lies within ``snap`` of a zero crossing (mod 2 pi)."""
    for ct in critical_angles(dpf.base):
        if abs(math.remainder(theta - ct.theta, TWO_PI)) <= snap:
            return True
    return False


def eval_L(dpf: DynamicalPartitionFunction, y) -> ComplexValue:
    """``base(y) ** M`` with the power taken in the log domain."""
    y = complex(y)
    if not (math.isfinite(y.real) and math.isfinite(y.imag)):
        raise ValueError(f"y must be finite, got {y}")
    b = dpf.base(y)
    if abs(b) <= ZERO_ABS_TOL:
        return ComplexValue.zero()
    m = dpf.exponent
    if m == 1:
        return ComplexValue.from_complex(b)
    return ComplexValue(m * math.log(abs(b)), _wrap(m * cmath.phase(b)))


def eval_on_circle(dpf: DynamicalPartitionFunction, theta: float) -> ComplexValue:
    """Loschmidt amplitude at dimensionless time ``theta``; exact zeros snapped."""
    if is_critical(dpf, theta):
        return ComplexValue.zero()
    return eval_L(dpf, _circle_point(theta))


def _thermal_probs(dpf, theta_beta):
    terms = [(w, k) for k, w in enumerate(dpf.base.weights) if w > 0]
    # shift by the largest exponent only, so theta_beta = 0 sums the raw weights
    top = max(k * theta_beta for _, k in terms)
    raw = [(w * math.exp(k * theta_beta - top), k) for w, k in terms]
    total = math.fsum(p for p, _ in raw)
    return [(p / total, k) for p, k in raw], top + math.log(total)


def f_thermal(dpf: DynamicalPartitionFunction, theta_beta: float) -> float:
    """Thermal free energy per degree of freedom, ``-ln base(exp(theta_beta))``.

    Finite for every real ``theta_beta``, including negative temperatures.
    """
    _, log_z = _thermal_probs(dpf, float(theta_beta))
    return 0.0 - log_z


def f_dyn(dpf: DynamicalPartitionFunction, theta_t: float) -> complex:
    """Complex dynamical free energy per degree of freedom.

    The imaginary part follows the branch of ``-arg base`` that is continuous
    along the circle from ``f_dyn(0) = 0``.  At an exact zero the result is
    ``complex(inf, nan)``.
    """
    theta_t = float(theta_t)
    if is_critical(dpf, theta_t):
        return complex(math.inf, math.nan)
    y = _circle_point(theta_t)
    b = dpf.base(y)
    a = _circle_abs(dpf, theta_t)
    if a <= ZERO_ABS_TOL:
        return complex(math.inf, math.nan)
    n = max(65, int(math.ceil(abs(theta_t) * (dpf.base.degree + 1) * 8)) + 1)
    path = np.linspace(0.0, theta_t, n)
    phases = np.unwrap(np.angle(dpf.base(np.exp(1j * path))))
    # anchor the endpoint to the directly computed phase on the tracked branch
    last = phases[-1]
    phase = cmath.phase(b)
    phase += TWO_PI * round((last - phase) / TWO_PI)
    return complex(0.0 - math.log(a), -phase)


def _circle_abs(dpf, theta_t):
    # compensated sums; |base| <= sum w = 1 on the circle
    w = dpf.base.weights
    re = math.fsum(x * math.cos(k * theta_t) for k, x in enumerate(w))
    im = math.fsum(x * math.sin(k * theta_t) for k, x in enumerate(w))
    return min(1.0, math.hypot(re, im))


def f_L(dpf: DynamicalPartitionFunction, theta_t: float) -> float:
    """Real dynamical free energy ``-ln|base(exp(i theta_t))|``; ``inf`` at zeros."""
    theta_t = float(theta_t)
    if is_critical(dpf, theta_t):
        return math.inf
    a = _circle_abs(dpf, theta_t)
    if a <= ZERO_ABS_TOL:
        return math.inf
    return 0.0 - math.log(a)


def log_return_probability(dpf: DynamicalPartitionFunction, theta_t: float) -> float:
    """``ln P = -2 M f_L``; ``-inf`` at exact zeros."""
    return -2.0 * dpf.exponent * f_L(dpf, theta_t)


def return_probability(dpf: DynamicalPartitionFunction, theta_t: float) -> float:
    """Loschmidt echo ``|L|**2`` in [0, 1].

    Underflow shows up as 0.0 with a finite :func:`log_return_probability`;
    a true zero has ``log_return_probability == -inf``.
    """
    lp = log_return_probability(dpf, theta_t)
    return 0.0 if lp == -math.inf else min(1.0, math.exp(lp))


def level_occupations(dpf: DynamicalPartitionFunction, theta_t: float = 0.0) -> tuple:
    # diagonal evolution only adds phases; occupations never change
    return dpf.base.weights


def mean_level(dpf: DynamicalPartitionFunction, theta_beta: float) -> float:
    """Thermal mean level index ``<k>`` per degree of freedom (``= -d f_thermal / d theta_beta``)."""
    probs, _ = _thermal_probs(dpf, float(theta_beta))
    return math.fsum(p * k for p, k in probs)


def level_variance(dpf: DynamicalPartitionFunction, theta_beta: float) -> float:
    probs, _ = _thermal_probs(dpf, float(theta_beta))
    return 0.5 * math.fsum(
        pj * pk * (kj - kk) ** 2 for pj, kj in probs for pk, kk in probs
    )


def specific_heat(dpf: DynamicalPartitionFunction, theta_beta: float) -> float:
    """Dimensionless specific heat per degree of freedom, ``C / k_B``.

    Uses ``d^2 ln base / d theta_beta^2 = Var(k)`` under the tilted weights
    ``w_k exp(k theta_beta)``, so ``C / k_B = theta_beta**2 Var(k)``.  Near
    infinite temperature this is ``theta_beta**2 / 4`` for the qubit.
    """
    theta_beta = float(theta_beta)
    return theta_beta * theta_beta * level_variance(dpf, theta_beta)


def early_time_coefficient(dpf: DynamicalPartitionFunction) -> float:
    """``c2`` in ``f_L(theta_t) ~ c2 theta_t**2``: half the level variance."""
    return 0.5 * dpf.base.level_variance()


def cr_correspondence_check(dpf: DynamicalPartitionFunction, h: float = 1e-4) -> CRReport:
    """Compare curvature at y = 1 along the real axis and along the circle.

    Analyticity of ``-ln base`` at ``y = 1`` with real Taylor coefficients
    means the two second derivatives are equal and opposite.
    """
    if not h > 0:
        raise ValueError(f"step must be positive, got {h}")
    if h > MAX_CR_STEP:
        raise StepTooLarge(f"step {h} exceeds {MAX_CR_STEP}")
    d2_real = (f_thermal(dpf, h) - 2.0 * f_thermal(dpf, 0.0) + f_thermal(dpf, -h)) / (h * h)
    d2_circ = (f_L(dpf, h) - 2.0 * f_L(dpf, 0.0) + f_L(dpf, -h)) / (h * h)
    return CRReport(d2_real, d2_circ, abs(d2_circ + d2_real), h)
