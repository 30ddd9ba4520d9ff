"""Complex zeros of the base polynomial and what they predict.

Roots come from the eigenvalues of the companion matrix (``numpy.roots``).
Multiple roots smear into a ring of radius ~ eps**(1/m) under rounding, so
eigenvalues are first grouped into clusters of candidate multiplicity ``m``
(radius ``tol**(1/m)``) and each cluster is replaced by its centroid, then
polished by Newton iteration on the ``(m-1)``-th derivative, where the root
is simple.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence
from .spectrum import DynamicalPartitionFunction, SpectralPolynomial

DEFAULT_TOL = 1e-10
DEFAULT_CIRCLE_TOL = 1e-9
GRID_POINTS = 4096
TWO_PI = 2.0 * math.pi


class RootClass(str, enum.Enum):
    ON_UNIT_CIRCLE = "on_unit_circle"
    INSIDE = "inside"
    OUTSIDE = "outside"
    POSITIVE_REAL_AXIS = "positive_real_axis"


@dataclass(frozen=True)
class Root:
    location: complex
    multiplicity: int
    cls: RootClass
    on_circle: bool

    def to_dict(self) -> dict:
        return {
            "re": self.location.real,
            "im": self.location.imag,
            "mult": self.multiplicity,
            "class": self.cls.value,
        }


@dataclass(frozen=True)
class ZeroSet:
    roots: tuple
    tol: float = DEFAULT_TOL
    circle_tol: float = DEFAULT_CIRCLE_TOL

    @property
    def degree(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    def to_dict(self) -> dict:
        return {"roots": [r.to_dict() for r in self.roots], "circle_tol": self.circle_tol}


@dataclass(frozen=True)
class CriticalTime:
    theta: float
    multiplicity: int


@dataclass(frozen=True)
class MinReturn:
    p_min: float
    theta: float


def classify(root, circle_tol: float = DEFAULT_CIRCLE_TOL) -> RootClass:
    """Place ``root`` relative to the unit circle.

    A root on the positive real axis is reported as such even when it also
    sits on the circle (``y = 1``), since that is the physically anomalous
    case: the thermal path would run through it.
    """
    if not 1e-12 <= circle_tol <= 1e-6:
        raise ValueError(f"circle_tol must lie in [1e-12, 1e-6], got {circle_tol}")
    z = complex(root)
    if abs(z.imag) <= circle_tol and z.real > 0:
        return RootClass.POSITIVE_REAL_AXIS
    r = abs(z)
    if abs(r - 1.0) <= circle_tol:
        return RootClass.ON_UNIT_CIRCLE
    return RootClass.INSIDE if r < 1.0 else RootClass.OUTSIDE


def _derivative_coeffs(coeffs: np.ndarray, order: int) -> np.ndarray:
    """Ascending-power coefficients of the ``order``-th derivative."""
    c = np.asarray(coeffs, dtype=float)
    for _ in range(order):
        if len(c) <= 1:
            return np.zeros(1)
        c = c[1:] * np.arange(1, len(c))
    return c


def _horner(c, z):
    acc = 0j
    for a in reversed(c):
        acc = acc * z + a
    return acc


def _newton(c, z0, radius, max_iter=60):
    """Newton on the polynomial with ascending coefficients ``c``.

    Falls back to ``z0`` if the iteration leaves the disc of ``radius``.
    """
    dc = _derivative_coeffs(c, 1)
    z = complex(z0)
    for _ in range(max_iter):
        f = _horner(c, z)
        if f == 0:
            break
        d = _horner(dc, z)
        if d == 0:
            break
        step = f / d
        z_new = z - step
        if abs(z_new - z0) > radius:
            return complex(z0)
        z = z_new
        if abs(step) <= 4e-16 * max(1.0, abs(z)):
            break
    return z


def _cluster(eigs: np.ndarray, tol: float):
    """Group eigenvalues into (centroid, multiplicity, members), largest clusters first."""
    n = len(eigs)
    clusters = []
    if n > 1:
        dist = np.abs(eigs[:, None] - eigs[None, :])
        np.fill_diagonal(dist, np.inf)
        loose = 2.0 * tol ** (1.0 / n)
        isolated = dist.min(axis=1) > loose
    else:
        isolated = np.ones(n, dtype=bool)
    clusters.extend((complex(eigs[j]), 1, [eigs[j]]) for j in range(n) if isolated[j])
    remaining = [j for j in range(n) if not isolated[j]]
    for m in range(len(remaining), 1, -1):
        radius = tol ** (1.0 / m)
        i = 0
        while i < len(remaining) and len(remaining) >= m:
            seed = eigs[remaining[i]]
            order = sorted(remaining, key=lambda j: (abs(eigs[j] - seed), j))
            members = order[:m]
            centroid = np.mean(eigs[members])
            if all(abs(eigs[j] - centroid) <= radius for j in members):
                clusters.append((complex(centroid), m, list(eigs[members])))
                remaining = [j for j in remaining if j not in members]
                i = 0
            else:
                i += 1
    clusters.extend((complex(eigs[j]), 1, [eigs[j]]) for j in remaining)
    return clusters


def find_zeros(
    base: SpectralPolynomial,
    tol: float = DEFAULT_TOL,
    circle_tol: float = DEFAULT_CIRCLE_TOL,
) -> ZeroSet:
    """All zeros of ``base`` with multiplicities and unit-circle classification.

    Passing a :class:`DynamicalPartitionFunction` returns the zeros of the
    full ``base ** M``: the zeros of its base with multiplicities scaled by
    ``M``.  Raises :class:`NonConvergence` when a polished root still has a
    relative residual above ``tol * (degree + 1)``.
    """
    if isinstance(base, DynamicalPartitionFunction):
        zs = find_zeros(base.base, tol, circle_tol)
        scaled = tuple(
            Root(r.location, r.multiplicity * base.exponent, r.cls, r.on_circle)
            for r in zs.roots
        )
        return ZeroSet(scaled, tol, circle_tol)
    if not 1e-14 <= tol <= 1e-4:
        raise ValueError(f"tol must lie in [1e-14, 1e-4], got {tol}")
    degree = base.degree
    if degree < 1:
        raise ValueError("constant polynomial has no zeros")
    c = base.as_array()
    eigs = np.roots(c[::-1]).astype(complex)

    dc1 = _derivative_coeffs(c, 1)

    def polish(z0, m):
        radius = tol ** (1.0 / m) if m > 1 else max(1e-6, 1e-6 * abs(z0))
        z = _newton(_derivative_coeffs(c, m - 1), z0, radius)
        # real coefficients: an isolated root with negligible imaginary part is real
        if abs(z.imag) <= 1e-13 * max(1.0, abs(z)):
            z = complex(z.real, 0.0)
        # a root at the origin makes the scale vanish together with the residual
        scale = max(float(np.sum(c * np.abs(z) ** np.arange(len(c)))), np.finfo(float).tiny)
        value = _horner(c, z)
        residual = abs(value) / scale
        # Newton step length estimates the forward error of a simple root;
        # a smeared multiple root has a tiny residual but a long step
        step = 0.0
        if m == 1 and value != 0:
            slope = abs(_horner(dc1, z))
            step = math.inf if slope == 0 else abs(value) / slope
        return z, residual, step

    limit = tol * (degree + 1)

    def accepted(z, residual, step):
        return residual <= limit and step <= tol * max(1.0, abs(z))

    found = []
    for centroid, m, members in _cluster(eigs, tol):
        z, residual, step = polish(centroid, m)
        if accepted(z, residual, step):
            found.append((z, m))
            continue
        # nearly coincident simple roots can masquerade as a multiple one
        singles = [polish(complex(e), 1) for e in members] if m > 1 else []
        if singles and all(accepted(*t) for t in singles):
            found.extend((w, 1) for w, _, _ in singles)
            continue
        raise NonConvergence(
            f"root {z} (multiplicity {m}): residual {residual:.3e}, "
            f"forward error estimate {step:.3e}"
        )

    roots = [
        Root(z, m, classify(z, circle_tol), abs(abs(z) - 1.0) <= circle_tol) for z, m in found
    ]

    roots.sort(key=lambda r: (round(math.atan2(r.location.imag, r.location.real), 12), abs(r.location)))
    zs = ZeroSet(tuple(roots), tol, circle_tol)
    if zs.degree != degree:
        raise NonConvergence(f"multiplicities sum to {zs.degree}, degree is {degree}")
    return zs


def predict_critical_times(zs: ZeroSet) -> list:
    """Angles in ``[0, 2 pi)`` at which the unit circle meets a zero.

    The full family of critical times is ``theta + 2 pi n``.
    """
    out = []
    for r in zs.roots:
        if not r.on_circle:
            continue
        phi = math.atan2(r.location.imag, r.location.real) % TWO_PI
        if phi >= TWO_PI:
            phi = 0.0
        out.append(CriticalTime(phi, r.multiplicity))
    out.sort(key=lambda ct: ct.theta)
    return out


@functools.lru_cache(maxsize=256)
def critical_angles(base: SpectralPolynomial) -> tuple:
    """Cached ``predict_critical_times(find_zeros(base))`` as a tuple."""
    if base.degree < 1:
        return ()
    return tuple(predict_critical_times(find_zeros(base)))


def _golden_min(f, a, b, xtol):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def min_return_probability(dpf: DynamicalPartitionFunction) -> MinReturn:
    """Smallest return probability over one period and where it occurs."""
    crit = critical_angles(dpf.base)
    if crit:
        return MinReturn(0.0, crit[0].theta)
    if dpf.base.degree == 0:
        return MinReturn(1.0, 0.0)

    def mod2(theta):
        return abs(dpf.base(complex(math.cos(theta), math.sin(theta)))) ** 2

    grid = TWO_PI * np.arange(GRID_POINTS) / GRID_POINTS
    vals = np.abs(dpf.base(np.exp(1j * grid))) ** 2
    i = int(np.argmin(vals))
    step = TWO_PI / GRID_POINTS
    theta = _golden_min(mod2, grid[i] - step, grid[i] + step, 1e-10)
    # a quadratic minimum pins theta only to ~sqrt(eps) by value; bisecting
    # the sign change of the derivative resolves it to rounding
    theta = _bisect_slope(dpf.base, theta - 1e-7, theta + 1e-7, theta)
    theta %= TWO_PI
    if mod2(grid[i]) < mod2(theta):
        theta = float(grid[i])
    return MinReturn(mod2(theta) ** dpf.exponent, float(theta))


def _slope(base, theta):
    """d/dtheta |base(exp(i theta))|**2 = 2 Re(conj(b) i y b'(y))."""
    y = complex(math.cos(theta), math.sin(theta))
    b = _horner(base.as_array(), y)
    db = _horner(_derivative_coeffs(base.as_array(), 1), y)
    return 2.0 * (b.conjugate() * 1j * y * db).real


def _bisect_slope(base, a, b, fallback):
    ga, gb = _slope(base, a), _slope(base, b)
    if not (ga < 0 < gb):
        return fallback
    for _ in range(80):
        mid = 0.5 * (a + b)
        if mid in (a, b):
            break
        g = _slope(base, mid)
        if g < 0:
            a = mid
        elif g > 0:
            b = mid
        else:
            return mid
    return 0.5 * (a + b)
