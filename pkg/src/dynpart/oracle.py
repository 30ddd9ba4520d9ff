"""Brute-force ground truth by direct enumeration.

Open Ising chain configurations are integer words: bit ``i`` set means
``s_i = +1``.  The number of aligned bonds is ``(N-1) - popcount((w ^ (w >> 1)) & mask)``
and, with the shifted bond energy ``-J (1 + s_i s_{i+1}) / 2``, the energy is
``E = -b J``.

Sums over the 2**N words run over fixed-size chunks.  Each chunk is reduced
with numpy's pairwise summation and the chunk partials are accumulated in
ascending order with Neumaier compensation, so the result is the same for
any number of worker threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._parallel import chunks, ordered_map
from .errors import CapExceeded
from .spectrum import DEFAULT_CAP, MAX_CAP, validate

CHUNK = 1 << 14


@dataclass(frozen=True)
class SpinConfiguration:
    word: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"chain length must be >= 1, got {self.n}")
        if not 0 <= self.word < (1 << self.n):
            raise ValueError(f"word {self.word} out of range for n = {self.n}")

    @classmethod
    def from_spins(cls, spins) -> "SpinConfiguration":
        word = 0
        for i, s in enumerate(spins):
            if s not in (1, -1):
                raise ValueError(f"spins must be +1 or -1, got {s}")
            if s == 1:
                word |= 1 << i
        return cls(word, len(spins))

    @property
    def spins(self) -> tuple:
        return tuple(1 if (self.word >> i) & 1 else -1 for i in range(self.n))


def check_cap(n: int, cap: int = DEFAULT_CAP) -> None:
    if cap > MAX_CAP:
        raise CapExceeded(f"cap {cap} above hard limit {MAX_CAP}")
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds enumeration cap {cap}")
    if n < 1:
        raise ValueError(f"chain length must be >= 1, got {n}")


def ising_energy(config, n: int | None = None) -> int:
    """Aligned-bond count ``b`` of a configuration; its energy is ``-b J``."""
    if isinstance(config, SpinConfiguration):
        word, n = config.word, config.n
    else:
        word = int(config)
        SpinConfiguration(word, n)
    mask = (1 << (n - 1)) - 1
    return (n - 1) - ((word ^ (word >> 1)) & mask).bit_count()


def bond_counts(n: int, lo: int = 0, hi: int | None = None) -> np.ndarray:
    """Aligned-bond counts for words ``lo .. hi-1``."""
    hi = (1 << n) if hi is None else hi
    words = np.arange(lo, hi, dtype=np.uint64)
    mask = np.uint64((1 << (n - 1)) - 1)
    flips = np.bitwise_count((words ^ (words >> np.uint64(1))) & mask)
    return (n - 1) - flips.astype(np.int64)


def bond_histogram(n: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Number of configurations with each aligned-bond count ``0 .. n-1``."""
    check_cap(n, cap)
    return np.bincount(bond_counts(n), minlength=n)


def _level_energy(b, n, shifted):
    # unshifted: -(J/2) sum zeta = (n-1)/2 - b
    return -float(b) if shifted else 0.5 * (n - 1) - b


def _neumaier(parts: list) -> np.ndarray:
    s = np.zeros_like(parts[0])
    c = np.zeros_like(parts[0])
    for x in parts:
        t = s + x
        big = np.abs(s) >= np.abs(x)
        c += np.where(big, (s - t) + x, (x - t) + s)
        s = t
    return s + c


def _enumerate(n: int, table: np.ndarray, workers) -> np.ndarray:
    """``2**-n * sum_words table[:, b(word)]`` for every row of ``table``."""
    is_complex = np.iscomplexobj(table)

    def run(rng):
        lo, hi = rng
        partial = table[:, bond_counts(n, lo, hi)].sum(axis=1)
        return partial.view(np.float64) if is_complex else partial

    parts = ordered_map(run, chunks(1 << n, CHUNK), workers)
    total = _neumaier(parts)
    if is_complex:
        total = total.view(np.complex128)
    return np.ldexp(total.real, -n) + (1j * np.ldexp(total.imag, -n) if is_complex else 0)


def oracle_thermal_Z_grid(n, thetas, cap=DEFAULT_CAP, shifted=True, workers=None) -> np.ndarray:
    check_cap(n, cap)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    table = np.array(
        [[math.exp(-th * _level_energy(b, n, shifted)) for b in range(n)] for th in thetas]
    )
    return _enumerate(n, table, workers)


def oracle_loschmidt_grid(n, thetas, cap=DEFAULT_CAP, shifted=True, workers=None) -> np.ndarray:
    check_cap(n, cap)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    table = np.array(
        [
            [
                complex(math.cos(-th * e), math.sin(-th * e))
                for e in (_level_energy(b, n, shifted) for b in range(n))
            ]
            for th in thetas
        ]
    )
    return _enumerate(n, table, workers)


def oracle_thermal_Z(n: int, theta_beta: float, cap: int = DEFAULT_CAP, shifted=True, workers=None) -> float:
    """Normalized partition function ``2**-n sum exp(-theta_beta E)``."""
    return float(oracle_thermal_Z_grid(n, [theta_beta], cap, shifted, workers)[0])


def oracle_loschmidt(n: int, theta_t: float, cap: int = DEFAULT_CAP, shifted=True, workers=None) -> complex:
    """Loschmidt amplitude of the all-x product state, ``2**-n sum exp(-i theta_t E)``.

    The unshifted energy convention differs by the global phase
    ``exp(-i theta_t (n-1) / 2)``; magnitudes agree.
    """
    return complex(oracle_loschmidt_grid(n, [theta_t], cap, shifted, workers)[0])


def oracle_energy_moments(n: int, cap: int = DEFAULT_CAP) -> tuple:
    """Mean and variance of the aligned-bond count over all 2**n configurations."""
    check_cap(n, cap)
    b = bond_counts(n)
    s1 = int(b.sum())
    s2 = int((b * b).sum())
    total = 1 << n
    mean = s1 / total
    var = (s2 * total - s1 * s1) / (total * total)
    return mean, var


def oracle_fewlevel(weights, energies, theta: float, path: str = "circle") -> complex:
    """Direct sum over levels with arbitrary (possibly incommensurate) energies.

    ``path="circle"`` gives ``sum_n w_n exp(-i E_n theta)``, ``path="real"``
    gives ``sum_n w_n exp(-E_n theta)``.  Energies are in units of J.
    """
    validate(weights)
    if len(weights) != len(energies):
        raise ValueError("weights and energies differ in length")
    if path == "circle":
        re = math.fsum(w * math.cos(-e * theta) for w, e in zip(weights, energies))
        im = math.fsum(w * math.sin(-e * theta) for w, e in zip(weights, energies))
        return complex(re, im)
    if path == "real":
        return complex(math.fsum(w * math.exp(-e * theta) for w, e in zip(weights, energies)))
    raise ValueError(f"path must be 'circle' or 'real', got {path!r}")


# relative accuracy of a 2**n-term sum degrades as 1/|L| near a zero of L;
# below this magnitude only an absolute bound is meaningful
NEAR_ZERO = 1e-3
CHECK_TOL = 1e-12


@dataclass(frozen=True)
class IsingComparison:
    n: int
    max_rel_thermal: float
    max_rel_circle: float
    max_abs_circle: float
    max_abs_near_zero: float
    moments_dev: float
    histogram_ok: bool

    @property
    def ok(self) -> bool:
        return (
            self.max_rel_thermal < CHECK_TOL
            and self.max_rel_circle < CHECK_TOL
            and self.max_abs_near_zero < CHECK_TOL
            and self.moments_dev < CHECK_TOL
            and self.histogram_ok
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "max_rel_thermal": self.max_rel_thermal,
            "max_rel_circle": self.max_rel_circle,
            "max_abs_circle": self.max_abs_circle,
            "max_abs_near_zero": self.max_abs_near_zero,
            "moments_dev": self.moments_dev,
            "histogram_ok": self.histogram_ok,
            "ok": self.ok,
        }


def compare_ising(n: int, n_points: int = 64, cap: int = DEFAULT_CAP, workers=None) -> IsingComparison:
    """Enumeration vs closed form for the open Ising chain of ``n`` sites.

    Thermal points: ``n_points`` values of theta_beta in [-3, 3].  Circle
    points: ``n_points`` angles ``2 pi j / n_points``.  Circle values are
    compared relatively where ``|L| >= 1e-3`` and absolutely elsewhere.
    """
    from . import analytic
    from .qsl import energy_stats
    from .spectrum import IsingOpenChain, compile_model

    check_cap(n, cap)
    dpf = compile_model(IsingOpenChain(n))
    betas = np.linspace(-3.0, 3.0, n_points)
    angles = 2.0 * np.pi * np.arange(n_points) / n_points

    z_or = oracle_thermal_Z_grid(n, betas, cap, workers=workers)
    z_an = np.array([abs(analytic.eval_L(dpf, math.exp(b))) for b in betas])
    rel_th = float(np.max(np.abs(z_or - z_an) / z_an))

    l_or = oracle_loschmidt_grid(n, angles, cap, workers=workers)
    l_an = np.array([complex(analytic.eval_on_circle(dpf, a)) for a in angles])
    err = np.abs(l_or - l_an)
    mag = np.abs(l_an)
    far = mag >= NEAR_ZERO
    rel_c = float(np.max(err[far] / mag[far])) if far.any() else 0.0
    abs_near = float(np.max(err[~far])) if (~far).any() else 0.0

    mean, var = oracle_energy_moments(n, cap)
    stats = energy_stats(dpf)
    # aligned-bond count b: mean excitation above ground is (n-1) - <b>
    moments_dev = max(
        abs(stats.total_mean_excitation - ((n - 1) - mean)),
        abs(stats.total_std_dev ** 2 - var),
    )
    hist = bond_histogram(n, cap)
    expected = np.array([2 * math.comb(n - 1, b) for b in range(n)])
    return IsingComparison(
        n, rel_th, rel_c, float(np.max(err)), abs_near, moments_dev,
        bool(np.array_equal(hist, expected)),
    )
