"""Mandelstam-Tamm and Margolus-Levitin speed limits for compiled models.

Bounds are built from total-system energy statistics; the M independent
factors add means and variances, so ``<eps>_tot = M <eps>`` and
``dH_tot = sqrt(M) dH``.  Times are in units of hbar / J.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dynamics import first_orthogonality_time
from .errors import BoundViolation, InsufficientPoints, ModelSpecError
from .spectrum import (
    DynamicalPartitionFunction,
    IsingOpenChain,
    ProductChain,
    compile_model,
)

SATURATION_TOL = 1e-9


@dataclass(frozen=True)
class EnergyStats:
    """Energy statistics of the initial state, in units of J.

    ``mean_excitation`` and ``std_dev`` are per degree of freedom;
    the ``total_*`` properties refer to the whole system.
    """

    mean_excitation: float
    std_dev: float
    exponent: int = 1

    @property
    def total_mean_excitation(self) -> float:
        return self.exponent * self.mean_excitation

    @property
    def total_std_dev(self) -> float:
        return math.sqrt(self.exponent) * self.std_dev


@dataclass(frozen=True)
class QslReport:
    tau_mt: float
    tau_ml: float
    tau_perp: Optional[float]

    @property
    def tau_bound(self) -> float:
        return max(self.tau_mt, self.tau_ml)

    @property
    def saturated_mt(self) -> bool:
        return self.tau_perp is not None and abs(self.tau_perp - self.tau_mt) <= SATURATION_TOL

    @property
    def saturated_ml(self) -> bool:
        return self.tau_perp is not None and abs(self.tau_perp - self.tau_ml) <= SATURATION_TOL

    def to_dict(self) -> dict:
        return {
            "tau_mt": self.tau_mt,
            "tau_ml": self.tau_ml,
            "tau_bound": self.tau_bound,
            "tau_perp": self.tau_perp,
            "saturated_mt": self.saturated_mt,
            "saturated_ml": self.saturated_ml,
        }


@dataclass(frozen=True)
class ScalingStudy:
    n_values: tuple
    m_values: tuple
    tau_mt: tuple
    tau_ml: tuple
    tau_perp: tuple
    slope_mt: float
    slope_ml: float

    def to_dict(self) -> dict:
        return {
            "n": list(self.n_values),
            "m": list(self.m_values),
            "tau_mt": list(self.tau_mt),
            "tau_ml": list(self.tau_ml),
            "tau_perp": list(self.tau_perp),
            "slope_mt": self.slope_mt,
            "slope_ml": self.slope_ml,
        }


def energy_stats(dpf: DynamicalPartitionFunction) -> EnergyStats:
    base = dpf.base
    # levels E_k = -k, ground state at -K
    mean_h = -base.mean_level()
    ground = -float(base.degree)
    var = base.level_variance()
    return EnergyStats(mean_h - ground, math.sqrt(var), dpf.exponent)


def mt_bound(stats: EnergyStats) -> float:
    """``pi / (2 dH_tot)``; ``inf`` for a frozen (zero-variance) state."""
    dh = stats.total_std_dev
    return math.inf if dh == 0 else math.pi / (2.0 * dh)


def ml_bound(stats: EnergyStats) -> float:
    """``pi / (2 <eps>_tot)``; ``inf`` when all weight sits in the ground level."""
    e = stats.total_mean_excitation
    return math.inf if e == 0 else math.pi / (2.0 * e)


def qsl_report(dpf: DynamicalPartitionFunction) -> QslReport:
    stats = energy_stats(dpf)
    report = QslReport(mt_bound(stats), ml_bound(stats), first_orthogonality_time(dpf))
    if report.tau_perp is not None and report.tau_perp < report.tau_bound - SATURATION_TOL:
        raise BoundViolation(
            f"tau_perp = {report.tau_perp} below speed limit {report.tau_bound}"
        )
    return report


_FAMILIES = {"product_chain": ProductChain, "ising_open_chain": IsingOpenChain}


def scaling_study(family, n_list, cap: int | None = None) -> ScalingStudy:
    """Fit ``ln tau`` against ``ln M`` for a chain family over sizes ``n_list``.

    ``family`` is :class:`ProductChain`, :class:`IsingOpenChain` or its
    serialized name.  Product structure makes the power laws exact:
    slopes -1/2 (MT) and -1 (ML).
    """
    cls = _FAMILIES.get(family, family)
    if cls not in (ProductChain, IsingOpenChain):
        raise ModelSpecError(f"scaling study needs a chain family, got {family!r}")
    ns = sorted(set(int(n) for n in n_list))
    if len(ns) < 4:
        raise InsufficientPoints(f"need at least 4 distinct sizes, got {ns}")
    dpfs = [compile_model(cls(n), cap=cap) for n in ns]
    ms = [d.exponent for d in dpfs]
    if len(set(ms)) < 4:
        raise InsufficientPoints(f"need at least 4 distinct exponents, got {ms}")
    stats = [energy_stats(d) for d in dpfs]
    t_mt = [mt_bound(s) for s in stats]
    t_ml = [ml_bound(s) for s in stats]
    log_m = np.log(ms)
    slope_mt = float(np.polyfit(log_m, np.log(t_mt), 1)[0])
    slope_ml = float(np.polyfit(log_m, np.log(t_ml), 1)[0])
    return ScalingStudy(
        tuple(ns),
        tuple(ms),
        tuple(t_mt),
        tuple(t_ml),
        tuple(first_orthogonality_time(d) for d in dpfs),
        slope_mt,
        slope_ml,
    )
