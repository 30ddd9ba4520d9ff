"""Model specifications and their compilation into spectral polynomials.

Every model handled here has a commensurate spectrum: level ``k`` sits at
energy ``E_k = -k J``.  The thermal partition function and the Loschmidt
amplitude are then the same polynomial

    L(y) = base(y) ** M,    base(y) = sum_k w_k y**k,

read at ``y = exp(theta_beta)`` (real axis) or ``y = exp(i theta_t)``
(unit circle).  All parameters inside the library are dimensionless,
``theta_beta = beta J`` and ``theta_t = J t / hbar``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import CapExceeded, ModelSpecError, NegativeWeightError, NormalizationError

NORM_TOL = 1e-12
DEFAULT_CAP = 20
MAX_CAP = 26

__all__ = [
    "UnitConvention",
    "SpectralPolynomial",
    "SingleQubit",
    "DegenerateQubit",
    "ProductChain",
    "IsingOpenChain",
    "ModelSpec",
    "DynamicalPartitionFunction",
    "validate",
    "compile_model",
    "spec_from_dict",
    "spec_to_dict",
]


@dataclass(frozen=True)
class UnitConvention:
    """Energy and action scales used only when converting at the CLI boundary."""

    j: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.j > 0 and math.isfinite(self.j)):
            raise ModelSpecError(f"J must be positive and finite, got {self.j}")
        if not (self.hbar > 0 and math.isfinite(self.hbar)):
            raise ModelSpecError(f"hbar must be positive and finite, got {self.hbar}")

    def theta_beta(self, beta):
        return beta * self.j

    def theta_t(self, t):
        return self.j * t / self.hbar

    def time_from_theta(self, theta):
        return theta * self.hbar / self.j


def validate(weights) -> None:
    """Check that ``weights`` is a legal set of level weights.

    Accepts a :class:`SpectralPolynomial` or any sequence of reals.  Raises
    :class:`NegativeWeightError` for a negative entry and
    :class:`NormalizationError` when the sum misses 1 by more than 1e-12
    (an all-zero sequence fails normalization too).
    """
    if isinstance(weights, SpectralPolynomial):
        weights = weights.weights
    w = [float(x) for x in weights]
    if not w:
        raise NormalizationError("empty weight sequence")
    for k, x in enumerate(w):
        if not math.isfinite(x):
            raise NormalizationError(f"weight {k} is not finite: {x}")
        if x < 0:
            raise NegativeWeightError(f"weight {k} is negative: {x}")
    total = math.fsum(w)
    if abs(total - 1.0) > NORM_TOL:
        raise NormalizationError(f"weights sum to {total!r}, expected 1")


@dataclass(frozen=True)
class SpectralPolynomial:
    """Nonnegative weights ``w_0 .. w_K`` over levels ``E_k = -k J``.

    Trailing zero weights are trimmed on construction so ``w_K > 0``.
    """

    weights: tuple

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        validate(w)
        while len(w) > 1 and w[-1] == 0.0:
            w = w[:-1]
        object.__setattr__(self, "weights", w)

    @property
    def degree(self) -> int:
        return len(self.weights) - 1

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)

    def mean_level(self) -> float:
        return math.fsum(k * w for k, w in enumerate(self.weights))

    def level_variance(self) -> float:
        # pairwise form: no cancellation for sharply peaked weights
        w = self.weights
        return 0.5 * math.fsum(
            w[j] * w[k] * (j - k) ** 2 for j in range(len(w)) for k in range(len(w))
        )

    def __call__(self, y):
        """Horner evaluation, scalar or ndarray ``y``."""
        acc = self.weights[-1]
        if isinstance(y, np.ndarray):
            acc = np.full(y.shape, acc, dtype=np.result_type(y, float))
        for w in reversed(self.weights[:-1]):
            acc = acc * y + w
        return acc


@dataclass(frozen=True)
class SingleQubit:
    j: float = 1.0


@dataclass(frozen=True)
class DegenerateQubit:
    """Qubit whose upper (E = 0) level is ``g``-fold degenerate."""

    g: int = 2
    j: float = 1.0


@dataclass(frozen=True)
class ProductChain:
    n: int = 1
    j: float = 1.0


@dataclass(frozen=True)
class IsingOpenChain:
    """Classical open Ising chain ``H = -(J/2) sum s_i s_{i+1}`` on ``n`` sites."""

    n: int = 2
    j: float = 1.0


ModelSpec = Union[SingleQubit, DegenerateQubit, ProductChain, IsingOpenChain]

_MODEL_NAMES = {
    "single_qubit": SingleQubit,
    "degenerate_qubit": DegenerateQubit,
    "product_chain": ProductChain,
    "ising_open_chain": IsingOpenChain,
}


@dataclass(frozen=True)
class DynamicalPartitionFunction:
    """``base(y) ** exponent`` with ``exponent`` independent degrees of freedom."""

    base: SpectralPolynomial
    exponent: int = 1
    label: str = field(default="custom", compare=False, repr=False)

    def __post_init__(self):
        if isinstance(self.base, (list, tuple)):
            object.__setattr__(self, "base", SpectralPolynomial(tuple(self.base)))
        if int(self.exponent) != self.exponent or self.exponent < 1:
            raise ModelSpecError(f"exponent must be a positive integer, got {self.exponent}")
        object.__setattr__(self, "exponent", int(self.exponent))

    @property
    def weights(self) -> tuple:
        return self.base.weights


def _check_int(name, value, minimum):
    if isinstance(value, bool) or int(value) != value:
        raise ModelSpecError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ModelSpecError(f"{name} must be >= {minimum}, got {value}")


def compile_model(spec: ModelSpec, cap: int | None = None) -> DynamicalPartitionFunction:
    """Reduce a model to its base polynomial and exponent.

    ``cap`` bounds the chain length.  It is off by default because the closed
    forms hold for any size; the enumeration oracle applies its own cap.

    >>> compile_model(IsingOpenChain(5))
    DynamicalPartitionFunction(base=SpectralPolynomial(weights=(0.5, 0.5)), exponent=4)
    """
    half = SpectralPolynomial((0.5, 0.5))
    if isinstance(spec, SingleQubit):
        return DynamicalPartitionFunction(half, 1, label="single_qubit")
    if isinstance(spec, DegenerateQubit):
        _check_int("g", spec.g, 1)
        g = int(spec.g)
        base = SpectralPolynomial((g / (g + 1), 1 / (g + 1)))
        return DynamicalPartitionFunction(base, 1, label=f"degenerate_qubit(g={g})")
    if isinstance(spec, ProductChain):
        _check_int("n", spec.n, 1)
        _check_cap(spec.n, cap)
        return DynamicalPartitionFunction(half, int(spec.n), label=f"product_chain(n={spec.n})")
    if isinstance(spec, IsingOpenChain):
        _check_int("n", spec.n, 2)
        _check_cap(spec.n, cap)
        # shifted bond energy -J (1 + zeta)/2: each of the n-1 bonds is a unit-gap qubit
        return DynamicalPartitionFunction(
            half, int(spec.n) - 1, label=f"ising_open_chain(n={spec.n})"
        )
    raise ModelSpecError(f"unknown model spec {spec!r}")


def _check_cap(n, cap):
    if cap is not None and n > cap:
        raise CapExceeded(f"n = {n} exceeds cap {cap}")


def spec_to_dict(spec: ModelSpec) -> dict:
    name = next(k for k, v in _MODEL_NAMES.items() if isinstance(spec, v))
    out = {"model": name}
    if isinstance(spec, (ProductChain, IsingOpenChain)):
        out["n"] = spec.n
    if isinstance(spec, DegenerateQubit):
        out["g"] = spec.g
    out["j"] = spec.j
    return out


def spec_from_dict(obj: dict) -> ModelSpec:
    """Parse ``{"model": ..., "n": ..., "g": ..., "j": ...}``."""
    try:
        cls = _MODEL_NAMES[obj["model"]]
    except KeyError:
        raise ModelSpecError(f"unknown or missing model in {obj!r}") from None
    unknown = set(obj) - {"model", "n", "g", "j"}
    if unknown:
        raise ModelSpecError(f"unexpected fields {sorted(unknown)}")
    kwargs = {}
    if obj.get("j") is not None:
        kwargs["j"] = float(obj["j"])
        UnitConvention(j=kwargs["j"])
    if cls in (ProductChain, IsingOpenChain):
        if obj.get("n") is None:
            raise ModelSpecError(f"model {obj['model']} requires n")
        kwargs["n"] = obj["n"]
    elif cls is DegenerateQubit and obj.get("g") is not None:
        kwargs["g"] = obj["g"]
    spec = cls(**kwargs)
    compile_model(spec)  # surface parameter errors at parse time
    return spec
