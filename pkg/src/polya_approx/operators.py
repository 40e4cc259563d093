"""Univariate operators: the Lupas operator with Pochhammer k-symbol, its
Kantorovich-Stancu modification, and the classical operators it reduces to.

The classical point operators and the Kantorovich-Lupas operator keep their
own weight formulas (binomial pmf, the gamma-function form of the Lupas
weights, the Stancu alpha-products) rather than delegating to the k-symbol
row, so the reductions can be cross-checked.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import special, stats

from .core import (
    QuadratureRule,
    as_grid,
    compensated_sum,
    gauss_legendre,
    polya_weight_row,
)
from .functions import FunctionSpec

__all__ = [
    "OperatorParams",
    "EvalResult",
    "OPERATOR_TAGS",
    "KANTOROVICH_TAGS",
    "bernstein_weights",
    "lupas_weights",
    "stancu_weights",
    "kantorovich_cell_means",
    "eval_bernstein",
    "eval_lupas",
    "eval_lupas_k",
    "eval_stancu",
    "eval_kantorovich_stancu_k",
    "eval_bernstein_kantorovich",
    "eval_d_star",
    "evaluate",
    "eval_on_grid",
    "max_workers",
    "values_on_grid",
]

OPERATOR_TAGS = (
    "bernstein",
    "stancu",
    "lupas",
    "lupas_k",
    "bernstein_kantorovich",
    "kantorovich_stancu_k",
    "d_star",
)
KANTOROVICH_TAGS = frozenset({"bernstein_kantorovich", "kantorovich_stancu_k", "d_star"})


@dataclass(frozen=True)
class OperatorParams:
    """Degree ``n``, k-symbol step ``k`` and Stancu shifts ``alpha <= beta``."""

    n: int
    k: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if not self.k >= 0:
            raise ValueError(f"k must be nonnegative, got {self.k!r}")
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha!r}")
        if not self.alpha <= self.beta:
            raise ValueError(f"invariant 0 <= alpha <= beta violated: alpha={self.alpha!r}, beta={self.beta!r}")

    @property
    def denominator(self) -> float:
        """``n + beta + 1``, the Kantorovich cell count scale."""
        return self.n + self.beta + 1.0

    def with_n(self, n: int) -> "OperatorParams":
        return OperatorParams(n, self.k, self.alpha, self.beta)

    def with_k(self, k: float) -> "OperatorParams":
        return OperatorParams(self.n, k, self.alpha, self.beta)


@dataclass(frozen=True)
class EvalResult:
    x: float
    value: float
    operator_tag: str


def _check_x(x: float):
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x!r}")


def bernstein_weights(n: int, x: float) -> np.ndarray:
    _check_x(x)
    return stats.binom.pmf(np.arange(n + 1), n, x)


def _log_rising(s: float, m: np.ndarray) -> np.ndarray:
    """``log((s)_m)`` for integer arrays ``m``; ``-inf`` where the product is 0.

    Written as ``log s + lnG(s+m) - lnG(s+1)`` so that tiny ``s`` (where
    ``lnG(s)`` overflows) stays finite.
    """
    if s == 0:
        return np.where(m == 0, 0.0, -np.inf)
    return np.where(m == 0, 0.0, np.log(s) + special.gammaln(s + m) - special.gammaln(s + 1))


def _endpoint_row(n: int, x: float) -> Optional[np.ndarray]:
    """Unit rows at ``x = 0`` and ``x = 1``, where all operators interpolate."""
    if x not in (0.0, 1.0):
        return None
    w = np.zeros(n + 1)
    w[0 if x == 0.0 else n] = 1.0
    return w


def lupas_weights(n: int, x: float) -> np.ndarray:
    """Lupas weights ``2 n!/(2n)! C(n,m) (nx)_m (n-nx)_{n-m}``."""
    _check_x(x)
    end = _endpoint_row(n, x)
    if end is not None:
        return end
    m = np.arange(n + 1)
    log_c = special.gammaln(n + 1) - special.gammaln(m + 1) - special.gammaln(n - m + 1)
    log_norm = np.log(2.0) + special.gammaln(n + 1) - special.gammaln(2 * n + 1)
    log_w = log_norm + log_c + _log_rising(n * x, m) + _log_rising(n - n * x, n - m)
    return np.exp(log_w)


def stancu_weights(n: int, alpha: float, x: float) -> np.ndarray:
    """Stancu weights from the products ``prod (x + v alpha)`` of the Polya urn."""
    _check_x(x)
    if alpha < 0:
        raise ValueError("the Stancu parameter must be nonnegative")
    end = _endpoint_row(n, x)
    if end is not None:
        return end
    m = np.arange(n + 1)
    steps = alpha * np.arange(n)

    def log_products(base):
        out = np.zeros(n + 1)
        if base == 0:
            out[1:] = -np.inf
        else:
            out[1:] = np.cumsum(np.log(base + steps))
        return out

    left = log_products(x)
    right = log_products(1.0 - x)
    log_den = np.sum(np.log1p(alpha * np.arange(1, n)))
    log_c = special.gammaln(n + 1) - special.gammaln(m + 1) - special.gammaln(n - m + 1)
    return np.exp(log_c + left[m] + right[n - m] - log_den)


def kantorovich_cell_means(
    f: FunctionSpec,
    n: int,
    alpha: float,
    beta: float,
    quad: Optional[QuadratureRule] = None,
) -> np.ndarray:
    """Mean of ``f`` over each cell ``[(m+alpha)/(n+beta+1), (m+alpha+1)/(n+beta+1)]``.

    The operator multiplies the cell integral by ``n+beta+1``, i.e. by the
    reciprocal cell width, so only the mean is needed.
    """
    quad = quad or gauss_legendre()
    width = 1.0 / (n + beta + 1.0)
    mid = (np.arange(n + 1) + alpha + 0.5) * width
    nodes = mid[:, None] + (0.5 * width) * quad.nodes[None, :]
    values = np.asarray(f(nodes), dtype=float)
    return 0.5 * (values * quad.weights).sum(axis=1)


def _grid_values(f: FunctionSpec, n: int) -> np.ndarray:
    return np.asarray(f(np.arange(n + 1) / n), dtype=float)


def _apply(weights: np.ndarray, values: np.ndarray) -> float:
    return compensated_sum(weights * values)


def eval_bernstein(f: FunctionSpec, n: int, x: float) -> float:
    return _apply(bernstein_weights(n, x), _grid_values(f, n))


def eval_lupas(f: FunctionSpec, n: int, x: float) -> float:
    return _apply(lupas_weights(n, x), _grid_values(f, n))


def eval_lupas_k(f: FunctionSpec, n: int, k: float, x: float) -> float:
    return _apply(polya_weight_row(n, k, x).weights, _grid_values(f, n))


def eval_stancu(f: FunctionSpec, n: int, alpha: float, x: float) -> float:
    return _apply(stancu_weights(n, alpha, x), _grid_values(f, n))


def eval_kantorovich_stancu_k(
    f: FunctionSpec, p: OperatorParams, x: float, quad: Optional[QuadratureRule] = None
) -> float:
    means = kantorovich_cell_means(f, p.n, p.alpha, p.beta, quad)
    return _apply(polya_weight_row(p.n, p.k, x).weights, means)


def eval_bernstein_kantorovich(
    f: FunctionSpec, n: int, x: float, quad: Optional[QuadratureRule] = None
) -> float:
    """The ``k = 0, alpha = beta = 0`` member of the Kantorovich-Stancu-k family."""
    return eval_kantorovich_stancu_k(f, OperatorParams(n, 0.0), x, quad)


def eval_d_star(f: FunctionSpec, n: int, x: float, quad: Optional[QuadratureRule] = None) -> float:
    """Kantorovich form of the Lupas operator (cells ``[m/(n+1), (m+1)/(n+1)]``)."""
    return _apply(lupas_weights(n, x), kantorovich_cell_means(f, n, 0.0, 0.0, quad))


def _plan(
    f: FunctionSpec,
    tag: str,
    p: OperatorParams,
    quad: Optional[QuadratureRule],
    stancu_alpha: Optional[float],
) -> tuple[Callable[[float], np.ndarray], np.ndarray]:
    """Weight rule and node values for one operator instance."""
    n = p.n
    if tag == "bernstein":
        return (lambda x: bernstein_weights(n, x)), _grid_values(f, n)
    if tag == "lupas":
        return (lambda x: lupas_weights(n, x)), _grid_values(f, n)
    if tag == "lupas_k":
        return (lambda x: polya_weight_row(n, p.k, x).weights), _grid_values(f, n)
    if tag == "stancu":
        a = p.k / n if stancu_alpha is None else stancu_alpha
        return (lambda x: stancu_weights(n, a, x)), _grid_values(f, n)
    if tag == "kantorovich_stancu_k":
        means = kantorovich_cell_means(f, n, p.alpha, p.beta, quad)
        return (lambda x: polya_weight_row(n, p.k, x).weights), means
    if tag == "bernstein_kantorovich":
        return (lambda x: polya_weight_row(n, 0.0, x).weights), kantorovich_cell_means(f, n, 0.0, 0.0, quad)
    if tag == "d_star":
        return (lambda x: lupas_weights(n, x)), kantorovich_cell_means(f, n, 0.0, 0.0, quad)
    raise ValueError(f"unknown operator tag {tag!r}; expected one of {', '.join(OPERATOR_TAGS)}")


def evaluate(
    f: FunctionSpec,
    tag: str,
    p: OperatorParams,
    x: float,
    quad: Optional[QuadratureRule] = None,
    stancu_alpha: Optional[float] = None,
) -> float:
    """Apply the operator named by ``tag`` to ``f`` at ``x``.

    Tags ignore the parameters they do not use (``bernstein`` ignores ``k``,
    ``d_star`` behaves as ``k=1, alpha=beta=0``). ``stancu`` takes its urn
    parameter from ``stancu_alpha``, defaulting to ``k/n``.
    """
    _check_x(x)
    weight_rule, values = _plan(f, tag, p, quad, stancu_alpha)
    return _apply(weight_rule(x), values)


def max_workers() -> int:
    """Thread cap from ``POLYA_APPROX_THREADS`` (``0`` or unset means auto)."""
    raw = os.environ.get("POLYA_APPROX_THREADS", "0").strip() or "0"
    try:
        count = int(raw)
    except ValueError:
        raise ValueError(f"POLYA_APPROX_THREADS must be an integer, got {raw!r}") from None
    if count < 0:
        raise ValueError("POLYA_APPROX_THREADS must be >= 0")
    return count or (os.cpu_count() or 1)


def eval_on_grid(
    f: FunctionSpec,
    tag: str,
    p: OperatorParams,
    grid: Sequence[float],
    quad: Optional[QuadratureRule] = None,
    stancu_alpha: Optional[float] = None,
) -> list[EvalResult]:
    """Pointwise application over ``grid``; results keep the grid order."""
    xs = as_grid(grid)
    if xs.size == 0:
        return []
    weight_rule, values = _plan(f, tag, p, quad, stancu_alpha)

    def one(x):
        return EvalResult(float(x), _apply(weight_rule(float(x)), values), tag)

    workers = min(max_workers(), xs.size)
    if workers <= 1 or xs.size < 64:
        return [one(x) for x in xs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, xs))


def values_on_grid(f, tag, p, grid, quad=None, stancu_alpha=None) -> np.ndarray:
    return np.array([r.value for r in eval_on_grid(f, tag, p, grid, quad, stancu_alpha)])
