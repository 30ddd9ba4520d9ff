"""Time series of the Loschmidt echo, orthogonality times and rate functions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import analytic
from ._parallel import chunks, ordered_map
from .errors import NotCritical
from .spectrum import DynamicalPartitionFunction
from .zeros import TWO_PI, critical_angles

CHUNK = 512
NOT_CRITICAL_TOL = 1e-9


@dataclass(frozen=True)
class ObservableSeries:
    """Per-point observables on a uniform grid of dimensionless times.

    ``f_L`` and ``I`` are per degree of freedom; ``P`` is the full-system
    return probability ``exp(-2 M f_L)``.  ``divergent`` marks exact zero
    crossings (``f_L = inf``, ``P = 0``); ``underflow`` marks points where P
    is nonzero but below the smallest double.
    """

    theta: np.ndarray
    f_L: np.ndarray
    P: np.ndarray
    I: np.ndarray
    divergent: np.ndarray
    underflow: np.ndarray
    exponent: int

    def __len__(self):
        return len(self.theta)


@dataclass(frozen=True)
class DivergenceReport:
    theta_c: float
    slope: float
    multiplicity: int

    @property
    def relative_error(self) -> float:
        return abs(self.slope - self.multiplicity) / self.multiplicity

    def within(self, rel: float = 0.05) -> bool:
        return self.relative_error <= rel


class RateFunction(NamedTuple):
    """Rate-function values at one time.

    ``f_L`` is the per-degree-of-freedom real free energy; ``two_f_L`` is the
    exponent in ``P = exp(-M * two_f_L)``; ``finite_size`` is ``-ln(P) / M``
    evaluated from the full-system echo, which equals ``two_f_L`` exactly for
    product structure.
    """

    f_L: float
    two_f_L: float
    finite_size: float


def _point(dpf, theta):
    div = analytic.is_critical(dpf, theta)
    f = math.inf if div else analytic.f_L(dpf, theta)
    lp = -2.0 * dpf.exponent * f
    p = 0.0 if f == math.inf else min(1.0, math.exp(lp))
    return f, p, div, (p == 0.0 and not div and f != math.inf)


def sample_series(
    dpf: DynamicalPartitionFunction,
    theta_min: float,
    theta_max: float,
    n_points: int,
    workers: int | None = None,
) -> ObservableSeries:
    """Sample ``f_L``, ``P`` and the rate function on ``n_points`` uniform times."""
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2, got {n_points}")
    if not theta_min < theta_max:
        raise ValueError(f"need theta_min < theta_max, got {theta_min}, {theta_max}")
    grid = np.linspace(theta_min, theta_max, n_points)

    def run(rng):
        lo, hi = rng
        return [_point(dpf, float(t)) for t in grid[lo:hi]]

    rows = [r for block in ordered_map(run, chunks(n_points, CHUNK), workers) for r in block]
    f = np.array([r[0] for r in rows])
    return ObservableSeries(
        theta=grid,
        f_L=f,
        P=np.array([r[1] for r in rows]),
        I=f.copy(),
        divergent=np.array([r[2] for r in rows], dtype=bool),
        underflow=np.array([r[3] for r in rows], dtype=bool),
        exponent=dpf.exponent,
    )


def first_orthogonality_time(dpf: DynamicalPartitionFunction) -> Optional[float]:
    """Smallest positive time at which L vanishes, or None if it never does."""
    crit = critical_angles(dpf.base)
    if not crit:
        return None
    return min(ct.theta if ct.theta > 0 else TWO_PI for ct in crit)


def critical_family(dpf: DynamicalPartitionFunction, n_max: int) -> list:
    """Critical times ``theta_c + 2 pi n`` for ``n = 0 .. n_max``, sorted."""
    base = [ct.theta if ct.theta > 0 else TWO_PI for ct in critical_angles(dpf.base)]
    return sorted(t + TWO_PI * n for t in base for n in range(n_max + 1))


def fit_divergence(dpf: DynamicalPartitionFunction, theta_c: float) -> DivergenceReport:
    """Fit ``f_L ~ -slope * ln|theta - theta_c|`` near a zero crossing.

    Uses 8 log-spaced offsets in [1e-4, 1e-2] on each side.  The slope
    estimates the multiplicity of the zero of the base polynomial.
    """
    match = None
    for ct in critical_angles(dpf.base):
        if abs(math.remainder(theta_c - ct.theta, TWO_PI)) <= NOT_CRITICAL_TOL:
            match = ct
    if match is None:
        raise NotCritical(f"theta = {theta_c} is not a zero crossing of {dpf.label}")
    deltas = np.logspace(-4, -2, 8)
    x = np.concatenate([-np.log(deltas), -np.log(deltas)])
    y = np.array(
        [analytic.f_L(dpf, theta_c + d) for d in deltas]
        + [analytic.f_L(dpf, theta_c - d) for d in deltas]
    )
    slope = float(np.polyfit(x, y, 1)[0])
    return DivergenceReport(float(theta_c), slope, match.multiplicity)


def rate_function(dpf: DynamicalPartitionFunction, theta_t: float) -> RateFunction:
    """Large-deviation rate function at ``theta_t``, in both conventions.

    ``P ~ exp(-N I)`` makes ``I = 2 f_L``, while identifying I with f_L drops
    the factor 2 coming from ``|L|**2``; both are returned, labelled.
    """
    f = analytic.f_L(dpf, theta_t)
    if f == math.inf:
        return RateFunction(math.inf, math.inf, math.inf)
    b = abs(dpf.base(complex(math.cos(theta_t), math.sin(theta_t))))
    p = b ** (2 * dpf.exponent)
    finite = math.inf if p == 0.0 else -math.log(p) / dpf.exponent
    return RateFunction(f, 2.0 * f, finite)
