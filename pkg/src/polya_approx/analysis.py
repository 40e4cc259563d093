"""Moduli of continuity, error bounds, convergence sweeps and Voronovskaja probes."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import QuadratureRule, uniform_grid
from .functions import FunctionSpec
from .moments import moment_oracle, voronovskaja_rhs_1d
from .operators import KANTOROVICH_TAGS, OperatorParams, evaluate, values_on_grid
from .reporting import csv_text, json_text

__all__ = [
    "SAFETY_FACTOR",
    "ModulusEstimate",
    "GridModulus",
    "modulus_estimate",
    "modulus_upper",
    "derivative_spec",
    "bound_surmod",
    "bound_modkant",
    "bound_c1",
    "sup_error",
    "VoronovskajaReport",
    "voronovskaja_probe",
    "doubling_sequence",
    "ConvergenceReport",
    "convergence_table",
]

SAFETY_FACTOR = 1.05
GRID_POINTS = 1001
# slack when turning delta into an integer grid offset
_OFFSET_EPS = 1e-9


@dataclass(frozen=True)
class ModulusEstimate:
    delta: float
    value: float
    grid_points: int
    exact: bool


class GridModulus:
    """Grid modulus of continuity of ``f`` for every offset at once.

    ``table[d]`` is the largest ``|f(x_i) - f(x_j)|`` with ``|i - j| <= d`` on
    the uniform grid, so lookups for any ``delta`` are O(1) and the result is
    nondecreasing in ``delta`` by construction.
    """

    def __init__(self, f: FunctionSpec, grid_points: int = GRID_POINTS):
        if grid_points < 2:
            raise ValueError("grid_points must be at least 2")
        self.grid_points = int(grid_points)
        values = np.asarray(f(uniform_grid(self.grid_points)), dtype=float)
        table = np.zeros(self.grid_points)
        for d in range(1, self.grid_points):
            table[d] = np.max(np.abs(values[d:] - values[:-d]))
        self.table = np.maximum.accumulate(table)

    def offset(self, delta: float) -> int:
        if not delta > 0:
            raise ValueError(f"delta must be positive, got {delta!r}")
        return min(int(math.floor(delta * (self.grid_points - 1) + _OFFSET_EPS)), self.grid_points - 1)

    def __call__(self, delta: float) -> float:
        return float(self.table[self.offset(delta)])


def modulus_estimate(f: FunctionSpec, delta: float, grid_points: int = GRID_POINTS) -> ModulusEstimate:
    """Grid maximum of ``|f(x) - f(t)|`` over pairs with ``|x - t| <= delta``."""
    value = GridModulus(f, grid_points)(delta)
    return ModulusEstimate(float(delta), value, int(grid_points), f.exact_modulus is not None)


class _ModulusSource:
    """Exact modulus when known, otherwise the grid estimate times ``SAFETY_FACTOR``."""

    def __init__(self, f: FunctionSpec, grid_points: int = GRID_POINTS):
        self.exact = f.exact_modulus
        self.grid = None if self.exact else GridModulus(f, grid_points)

    def __call__(self, delta: float) -> float:
        if delta <= 0:
            return 0.0
        if self.exact is not None:
            return float(self.exact(delta))
        return SAFETY_FACTOR * self.grid(delta)


def modulus_upper(f: FunctionSpec, delta: float, grid_points: int = GRID_POINTS) -> float:
    """The modulus value the bounds use (exact, or padded grid estimate)."""
    return _ModulusSource(f, grid_points)(delta)


def derivative_spec(f: FunctionSpec) -> FunctionSpec:
    if f.d1 is None:
        raise ValueError(f"function {f.name!r} carries no derivative")
    d2 = f.d2
    exact = None
    if d2 is not None:
        probe = np.asarray(d2(np.linspace(0.0, 1.0, 65)), dtype=float)
        if np.all(probe == 0):
            exact = lambda d: 0.0  # constant derivative
    return FunctionSpec(f"{f.name}'", f.d1, d1=d2, exact_modulus=exact)


def bound_surmod(f: FunctionSpec, n: int, k: float, grid_points: int = GRID_POINTS, modulus=None) -> float:
    """``(3/2) omega(f, sqrt((k+1)/(n+k)))``, uniform bound for ``P_{n,k}``."""
    omega = modulus or _ModulusSource(f, grid_points)
    return 1.5 * omega(math.sqrt((k + 1) / (n + k)))


def bound_modkant(f: FunctionSpec, p: OperatorParams, x: float, grid_points: int = GRID_POINTS, modulus=None) -> float:
    """``2 omega(f, sqrt(nu_2))`` with ``nu_2`` the oracle second central moment at ``x``."""
    omega = modulus or _ModulusSource(f, grid_points)
    nu2 = moment_oracle("kantorovich_stancu_k", p, x, 2, central=True)
    return 2.0 * omega(math.sqrt(nu2))


def bound_c1(
    f: FunctionSpec,
    p: OperatorParams,
    x: float,
    derivative: Optional[FunctionSpec] = None,
    grid_points: int = GRID_POINTS,
) -> float:
    """``|nu_1| |f'(x)| + 2 sqrt(nu_2) omega(f', sqrt(nu_2))`` for ``f`` in C^1."""
    fp = derivative or derivative_spec(f)
    nu1 = moment_oracle("kantorovich_stancu_k", p, x, 1, central=True)
    nu2 = moment_oracle("kantorovich_stancu_k", p, x, 2, central=True)
    root = math.sqrt(nu2)
    slope = float(fp(np.array([x]))[0])
    return abs(nu1) * abs(slope) + 2.0 * root * _ModulusSource(fp, grid_points)(root)


def _k_equivalent(tag: str, p: OperatorParams, stancu_alpha: Optional[float]) -> float:
    if tag in ("bernstein", "bernstein_kantorovich"):
        return 0.0
    if tag in ("lupas", "d_star"):
        return 1.0
    if tag == "stancu" and stancu_alpha is not None:
        return stancu_alpha * p.n
    return p.k


def _kant_params(tag: str, p: OperatorParams) -> OperatorParams:
    if tag == "kantorovich_stancu_k":
        return p
    return OperatorParams(p.n, _k_equivalent(tag, p, None))


def sup_error(
    f: FunctionSpec,
    tag: str,
    p: OperatorParams,
    grid: Optional[np.ndarray] = None,
    quad: Optional[QuadratureRule] = None,
    stancu_alpha: Optional[float] = None,
) -> float:
    xs = uniform_grid(GRID_POINTS) if grid is None else np.asarray(grid, dtype=float)
    approx = values_on_grid(f, tag, p, xs, quad, stancu_alpha)
    return float(np.max(np.abs(approx - np.asarray(f(xs), dtype=float))))


@dataclass(frozen=True)
class VoronovskajaReport:
    x: float
    params: OperatorParams
    n_sequence: tuple
    scaled_error: tuple
    limit: float
    gaps: tuple

    def gaps_decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.gaps, self.gaps[1:]))

    def final_gap_ok(self, rel: float = 0.02) -> bool:
        return self.gaps[-1] < rel * max(1.0, abs(self.limit))

    def csv_rows(self):
        p = self.params
        for n, s, g in zip(self.n_sequence, self.scaled_error, self.gaps):
            yield (n, p.k, p.alpha, p.beta, self.x, s, self.limit, g)

    CSV_HEADER = ("n", "k", "alpha", "beta", "x", "scaled_error", "limit", "gap")

    def to_csv(self) -> str:
        return csv_text(self.CSV_HEADER, self.csv_rows())

    def to_json(self) -> str:
        return json_text(asdict(self))


def doubling_sequence(start: int = 100, count: int = 5) -> tuple:
    return tuple(start * 2**i for i in range(count))


def voronovskaja_probe(
    f: FunctionSpec,
    p: OperatorParams,
    x: float,
    n_sequence: Sequence[int] = doubling_sequence(),
    quad: Optional[QuadratureRule] = None,
) -> VoronovskajaReport:
    """``n (K_n f(x) - f(x))`` along ``n_sequence`` against the limiting value.

    Only ``k, alpha, beta`` are taken from ``p``; the degree runs over the
    sequence. Derivatives come from the catalog entry, not finite differences.
    """
    if not 0.0 < x < 1.0:
        raise ValueError("the Voronovskaja probe needs an interior point")
    if f.d1 is None or f.d2 is None:
        raise ValueError(f"function {f.name!r} needs analytic first and second derivatives")
    xa = np.array([x])
    fx = float(f(xa)[0])
    limit = voronovskaja_rhs_1d(p, x, float(f.d1(xa)[0]), float(f.d2(xa)[0]))
    scaled = []
    for n in n_sequence:
        value = evaluate(f, "kantorovich_stancu_k", p.with_n(n), x, quad)
        scaled.append(n * (value - fx))
    gaps = tuple(abs(s - limit) for s in scaled)
    return VoronovskajaReport(float(x), p, tuple(int(n) for n in n_sequence), tuple(scaled), limit, gaps)


@dataclass(frozen=True)
class ConvergenceReport:
    function: str
    operator_tag: str
    sweep: tuple
    sup_error: tuple
    bound: tuple
    bound_exact: bool = field(default=False)

    CSV_HEADER = ("function", "operator", "n", "k", "alpha", "beta", "sup_error", "bound")

    def csv_rows(self):
        for p, e, b in zip(self.sweep, self.sup_error, self.bound):
            yield (self.function, self.operator_tag, p.n, p.k, p.alpha, p.beta, e, b)

    def to_csv(self) -> str:
        return csv_text(self.CSV_HEADER, self.csv_rows())

    def to_json(self) -> str:
        return json_text(asdict(self))


def convergence_table(
    f: FunctionSpec,
    operator_tag: str,
    sweep: Sequence[OperatorParams],
    grid_points: int = GRID_POINTS,
    quad: Optional[QuadratureRule] = None,
    stancu_alpha: Optional[float] = None,
) -> ConvergenceReport:
    """Sup-grid errors and the matching modulus bounds for each sweep entry.

    Point operators get the uniform bound ``(3/2) omega(f, sqrt((k+1)/(n+k)))``
    with ``k`` read off the operator (0 for Bernstein, 1 for Lupas, ``n alpha``
    for Stancu). Kantorovich operators get ``2 omega(f, sqrt(max_x nu_2))``,
    the supremum over the grid of the pointwise bound.
    """
    if not sweep:
        raise ValueError("sweep must be nonempty")
    xs = uniform_grid(grid_points)
    omega = _ModulusSource(f, grid_points)
    errors, bounds = [], []
    for p in sweep:
        errors.append(sup_error(f, operator_tag, p, xs, quad, stancu_alpha))
        if operator_tag in KANTOROVICH_TAGS:
            kp = _kant_params(operator_tag, p)
            nu2 = max(moment_oracle("kantorovich_stancu_k", kp, x, 2, central=True) for x in xs)
            bounds.append(2.0 * omega(math.sqrt(nu2)))
        else:
            bounds.append(bound_surmod(f, p.n, _k_equivalent(operator_tag, p, stancu_alpha), modulus=omega))
    return ConvergenceReport(
        f.name, operator_tag, tuple(sweep), tuple(errors), tuple(bounds), f.exact_modulus is not None
    )
