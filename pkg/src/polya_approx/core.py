"""Numerical primitives: Pochhammer k-symbol, Polya basis weights, quadrature.

Weight rows are built in the log domain with explicit zero tracking so that
products like ``(n)_{n,k}`` never overflow. A slow direct-product path in
extended precision (mpmath) is kept alongside as an independent oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np

__all__ = [
    "SignedLog",
    "QuadratureRule",
    "WeightRow",
    "EXTENDED_MAX_N",
    "MAX_QUAD_ORDER",
    "DEFAULT_QUAD_ORDER",
    "compensated_sum",
    "pochhammer_k",
    "pochhammer_k_signed_log",
    "polya_weight_row",
    "polya_weight_row_extended",
    "gauss_legendre",
    "as_grid",
    "uniform_grid",
]

EXTENDED_MAX_N = 60
MAX_QUAD_ORDER = 64
DEFAULT_QUAD_ORDER = 16


def compensated_sum(values) -> float:
    """Correctly rounded sum, independent of any thread layout."""
    return math.fsum(values)


@dataclass(frozen=True)
class SignedLog:
    """A real number stored as ``sign * exp(log_magnitude)``.

    ``sign == 0`` encodes an exact zero; ``log_magnitude`` is then ignored.
    """

    sign: int
    log_magnitude: float = 0.0

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")

    @classmethod
    def from_float(cls, value: float) -> "SignedLog":
        if value == 0:
            return cls(0, 0.0)
        return cls(1 if value > 0 else -1, math.log(abs(value)))

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __mul__(self, other: "SignedLog") -> "SignedLog":
        if self.sign == 0 or other.sign == 0:
            return SignedLog(0, 0.0)
        return SignedLog(self.sign * other.sign, self.log_magnitude + other.log_magnitude)

    def __truediv__(self, other: "SignedLog") -> "SignedLog":
        if other.sign == 0:
            raise ZeroDivisionError("division by an exact zero SignedLog")
        if self.sign == 0:
            return SignedLog(0, 0.0)
        return SignedLog(self.sign * other.sign, self.log_magnitude - other.log_magnitude)


def pochhammer_k(lam: float, m: int, k: float) -> float:
    """Pochhammer k-symbol ``lam (lam+k) ... (lam+(m-1)k)``.

    The empty product (``m == 0``) is 1 for every ``lam``, including 0.
    """
    if m < 0:
        raise ValueError("m must be a nonnegative integer")
    if k < 0:
        raise ValueError("k must be nonnegative")
    return math.prod(lam + i * k for i in range(m))


def pochhammer_k_signed_log(lam: float, m: int, k: float) -> SignedLog:
    """Overflow-free :func:`pochhammer_k` for ``lam >= 0``."""
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    if m < 0:
        raise ValueError("m must be a nonnegative integer")
    if k < 0:
        raise ValueError("k must be nonnegative")
    if m == 0:
        return SignedLog(1, 0.0)
    if lam == 0:
        return SignedLog(0, 0.0)
    return SignedLog(1, compensated_sum(math.log(lam + i * k) for i in range(m)))


@dataclass(frozen=True)
class WeightRow:
    """Polya basis weights ``p_{n,m,k}(x)`` for ``m = 0..n``."""

    n: int
    k: float
    x: float
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.weights.flags.writeable = False

    def total(self) -> float:
        return compensated_sum(self.weights)

    def __len__(self):
        return len(self.weights)


def _check_row_args(n: int, k: float, x: float):
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k!r}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x!r}")


def polya_weight_row(n: int, k: float, x: float) -> WeightRow:
    """Weights ``C(n,m) (nx)_{m,k} (n-nx)_{n-m,k} / (n)_{n,k}``, log domain.

    The modal weight is assembled from one correctly rounded sum of all log
    factors; the others follow from O(1) log-ratios accumulated outward from
    the mode, so the large log-factorials never cancel against each other.
    """
    _check_row_args(n, k, x)
    n = int(n)
    weights = np.zeros(n + 1)
    # (0)_{m,k} == 0 for m >= 1: the endpoint rows are unit vectors
    if x == 0.0:
        weights[0] = 1.0
        return WeightRow(n, float(k), float(x), weights)
    if x == 1.0:
        weights[n] = 1.0
        return WeightRow(n, float(k), float(x), weights)

    nx = n * x
    rest = n - nx
    j = np.arange(1, n + 1)
    # log(w_j / w_{j-1})
    log_ratio = (
        np.log((n - j + 1) / j)
        + np.log(nx + (j - 1) * k)
        - np.log(rest + (n - j) * k)
    )
    # crude profile, only used to pick the anchor index
    profile = np.concatenate(([0.0], np.cumsum(log_ratio)))
    mode = int(np.argmax(profile))

    i = np.arange(1, mode + 1)
    terms = [
        np.log((n - mode + i) / i),
        np.log(nx + k * np.arange(mode)),
        np.log(rest + k * np.arange(n - mode)),
        -np.log(n + k * np.arange(n)),
    ]
    log_mode = compensated_sum(np.concatenate(terms))

    log_w = np.empty(n + 1)
    log_w[mode] = log_mode
    log_w[mode + 1:] = log_mode + np.cumsum(log_ratio[mode:])
    log_w[:mode] = (log_mode - np.cumsum(log_ratio[:mode][::-1]))[::-1]
    weights = np.exp(log_w)
    return WeightRow(n, float(k), float(x), weights)


def polya_weight_row_extended(n: int, k: float, x: float, dps: int = 50) -> list:
    """Direct-product weights in extended precision (oracle path, ``n <= 60``).

    Returns mpmath ``mpf`` values; the float inputs are taken exactly.
    """
    _check_row_args(n, k, x)
    if n > EXTENDED_MAX_N:
        raise ValueError(f"extended-precision path supports n <= {EXTENDED_MAX_N}, got {n}")
    n = int(n)
    with mpmath.workdps(dps):
        kk = mpmath.mpf(k)
        xx = mpmath.mpf(x)
        nx = n * xx
        rest = n - nx

        def poch(lam, count):
            out = mpmath.mpf(1)
            for i in range(count):
                out *= lam + i * kk
            return out

        norm = poch(mpmath.mpf(n), n)
        return [
            mpmath.binomial(n, j) * poch(nx, j) * poch(rest, n - j) / norm
            for j in range(n + 1)
        ]


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre nodes and weights on ``[-1, 1]``."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self):
        self.nodes.flags.writeable = False
        self.weights.flags.writeable = False

    def integrate(self, f, a: float, b: float) -> float:
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        return half * compensated_sum(self.weights * f(mid + half * self.nodes))


@lru_cache(maxsize=None)
def gauss_legendre(order: int = DEFAULT_QUAD_ORDER) -> QuadratureRule:
    if int(order) != order or not 1 <= order <= MAX_QUAD_ORDER:
        raise ValueError(f"quadrature order must be an integer in [1, {MAX_QUAD_ORDER}], got {order!r}")
    nodes, weights = np.polynomial.legendre.leggauss(int(order))
    return QuadratureRule(nodes, weights, int(order))


def as_grid(grid: Sequence[float] | np.ndarray) -> np.ndarray:
    arr = np.asarray(grid, dtype=float).ravel()
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise ValueError("grid points must lie in [0, 1]")
    return arr


def uniform_grid(points: int = 1001) -> np.ndarray:
    if points < 2:
        raise ValueError("a uniform grid needs at least 2 points")
    return np.linspace(0.0, 1.0, int(points))
