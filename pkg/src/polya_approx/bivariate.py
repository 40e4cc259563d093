"""Tensor-product Kantorovich-Stancu-k operator on the unit square.

The operator applies the univariate weight rows on each axis to the means of
``f`` over product cells. Cell means use the tensor product of the axis
Gauss-Legendre rule, so separable integrands factor exactly at the numerical
level as well.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from .analysis import SAFETY_FACTOR, doubling_sequence
from .core import QuadratureRule, compensated_sum, gauss_legendre, polya_weight_row, uniform_grid
from .functions import BivariateFunctionSpec
from .moments import moment_oracle, xi_bound
from .operators import OperatorParams, lupas_weights
from .reporting import csv_text, json_text

__all__ = [
    "BivariateParams",
    "LipschitzSpec",
    "cell_mean_matrix",
    "eval_2d",
    "eval_2d_grid",
    "eval_d_star_2d",
    "eval_d_star_2d_grid",
    "MOMENTS_2D",
    "CENTRAL_MOMENTS_2D",
    "moment_2d_closed",
    "central_moment_2d_closed",
    "GridModulus2D",
    "complete_modulus_estimate",
    "partial_moduli_estimate",
    "bound_complete",
    "bound_partial",
    "axis_second_moment_sup",
    "bound_lipschitz",
    "bound_grad",
    "Voronovskaja2DReport",
    "voronovskaja_rhs_2d",
    "voronovskaja_probe_2d",
    "cross_term",
]

GRID_POINTS_2D = 101
# weights below this fraction of the row maximum are skipped in point evaluation;
# the skipped mass is below (n+1) * 1e-20, far under double-precision rounding
_TRIM = 1e-20
_CHUNK = 16


@dataclass(frozen=True)
class BivariateParams:
    """Per-axis parameters. ``strict`` also enforces ``a1 <= a2 <= b1 <= b2``."""

    px: OperatorParams
    py: OperatorParams
    strict: bool = False

    def __post_init__(self):
        if self.strict:
            a1, a2, b1, b2 = self.px.alpha, self.py.alpha, self.px.beta, self.py.beta
            if not (0 <= a1 <= a2 <= b1 <= b2):
                raise ValueError(
                    "strict mode requires 0 <= alpha1 <= alpha2 <= beta1 <= beta2, "
                    f"got alpha1={a1}, alpha2={a2}, beta1={b1}, beta2={b2}"
                )

    @classmethod
    def equal(cls, n: int, k: float = 0.0, alpha: float = 0.0, beta: float = 0.0) -> "BivariateParams":
        p = OperatorParams(n, k, alpha, beta)
        return cls(p, p)

    def with_n(self, n: int) -> "BivariateParams":
        return BivariateParams(self.px.with_n(n), self.py.with_n(n), self.strict)


@dataclass(frozen=True)
class LipschitzSpec:
    """Class of ``f`` with ``|f(t,s) - f(x,y)| <= M |t-x|^g1 |s-y|^g2``."""

    M: float
    gamma1: float = 1.0
    gamma2: float = 1.0

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError("M must be positive")
        for g in (self.gamma1, self.gamma2):
            if not 0 < g <= 1:
                raise ValueError("exponents must lie in (0, 1]")

    def violation(self, f: BivariateFunctionSpec, grid_points: int = 21) -> float:
        """Largest ``|f(t,s) - f(x,y)| - M |t-x|^g1 |s-y|^g2`` over sampled pairs."""
        g = uniform_grid(grid_points)
        X, Y = np.meshgrid(g, g, indexing="ij")
        F = np.asarray(f(X, Y), dtype=float).ravel()
        xs, ys = X.ravel(), Y.ravel()
        lhs = np.abs(F[:, None] - F[None, :])
        rhs = self.M * np.abs(xs[:, None] - xs[None, :]) ** self.gamma1 * np.abs(ys[:, None] - ys[None, :]) ** self.gamma2
        return float(np.max(lhs - rhs))

    def certifies(self, f: BivariateFunctionSpec, grid_points: int = 21, tol: float = 1e-12) -> bool:
        return self.violation(f, grid_points) <= tol


def _cells(p: OperatorParams, quad: QuadratureRule, idx: np.ndarray) -> np.ndarray:
    """Gauss nodes inside each requested cell, shape ``(len(idx), order)``."""
    width = 1.0 / p.denominator
    mid = (idx + p.alpha + 0.5) * width
    return mid[:, None] + (0.5 * width) * quad.nodes[None, :]


def cell_mean_matrix(
    f: BivariateFunctionSpec,
    px: OperatorParams,
    py: OperatorParams,
    quad: Optional[QuadratureRule] = None,
    rows: Optional[np.ndarray] = None,
    cols: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Means of ``f`` over the product cells ``rows x cols`` (default: all)."""
    quad = quad or gauss_legendre()
    rows = np.arange(px.n + 1) if rows is None else np.asarray(rows)
    cols = np.arange(py.n + 1) if cols is None else np.asarray(cols)
    tx = _cells(px, quad, rows)
    sy = _cells(py, quad, cols)
    wq = 0.25 * quad.weights[:, None] * quad.weights[None, :]
    out = np.empty((rows.size, cols.size))
    for start in range(0, rows.size, _CHUNK):
        block = tx[start:start + _CHUNK]
        vals = np.asarray(f(block[:, None, :, None], sy[None, :, None, :]), dtype=float)
        out[start:start + _CHUNK] = (vals * wq).sum(axis=(2, 3))
    return out


def _support(w: np.ndarray) -> np.ndarray:
    return np.flatnonzero(w >= _TRIM * w.max())


def _contract(w1: np.ndarray, w2: np.ndarray, M: np.ndarray) -> float:
    # fixed reduction order: pairwise along m2 per row, then a correctly rounded sum
    return compensated_sum(w1 * (M * w2).sum(axis=1))


def _check_xy(x, y):
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise ValueError(f"(x, y) must lie in the unit square, got ({x!r}, {y!r})")


def eval_2d(
    f: BivariateFunctionSpec,
    bp: BivariateParams,
    x: float,
    y: float,
    quad: Optional[QuadratureRule] = None,
) -> float:
    """Bivariate operator at one point; only cells with non-negligible weight are integrated."""
    _check_xy(x, y)
    w1 = polya_weight_row(bp.px.n, bp.px.k, x).weights
    w2 = polya_weight_row(bp.py.n, bp.py.k, y).weights
    i1, i2 = _support(w1), _support(w2)
    M = cell_mean_matrix(f, bp.px, bp.py, quad, i1, i2)
    return _contract(w1[i1], w2[i2], M)


def _grid_contract(W1: np.ndarray, W2: np.ndarray, M: np.ndarray) -> np.ndarray:
    T = (M[:, None, :] * W2[None, :, :]).sum(axis=2)  # (n1+1, ny)
    out = np.empty((W1.shape[0], W2.shape[0]))
    for i, w1 in enumerate(W1):
        for j in range(W2.shape[0]):
            out[i, j] = compensated_sum(w1 * T[:, j])
    return out


def eval_2d_grid(
    f: BivariateFunctionSpec,
    bp: BivariateParams,
    xs: Sequence[float],
    ys: Sequence[float],
    quad: Optional[QuadratureRule] = None,
) -> np.ndarray:
    """Values on the tensor grid ``xs x ys``, shape ``(len(xs), len(ys))``.

    The cell means are computed once and shared by all grid points.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    for v in (xs, ys):
        if v.size and (v.min() < 0 or v.max() > 1):
            raise ValueError("grid points must lie in [0, 1]")
    M = cell_mean_matrix(f, bp.px, bp.py, quad)
    W1 = np.array([polya_weight_row(bp.px.n, bp.px.k, x).weights for x in xs]).reshape(len(xs), -1)
    W2 = np.array([polya_weight_row(bp.py.n, bp.py.k, y).weights for y in ys]).reshape(len(ys), -1)
    return _grid_contract(W1, W2, M)


def _dstar_params(n1: int, n2: int) -> tuple[OperatorParams, OperatorParams]:
    return OperatorParams(n1, 1.0), OperatorParams(n2, 1.0)


def eval_d_star_2d(
    f: BivariateFunctionSpec, n1: int, n2: int, x: float, y: float, quad: Optional[QuadratureRule] = None
) -> float:
    """Bivariate Kantorovich-Lupas operator, built from the gamma-form Lupas weights."""
    _check_xy(x, y)
    px, py = _dstar_params(n1, n2)
    M = cell_mean_matrix(f, px, py, quad)
    return _contract(lupas_weights(n1, x), lupas_weights(n2, y), M)


def eval_d_star_2d_grid(
    f: BivariateFunctionSpec, n1: int, n2: int, xs, ys, quad: Optional[QuadratureRule] = None
) -> np.ndarray:
    px, py = _dstar_params(n1, n2)
    M = cell_mean_matrix(f, px, py, quad)
    W1 = np.array([lupas_weights(n1, x) for x in np.asarray(xs, dtype=float)]).reshape(len(xs), -1)
    W2 = np.array([lupas_weights(n2, y) for y in np.asarray(ys, dtype=float)]).reshape(len(ys), -1)
    return _grid_contract(W1, W2, M)


MOMENTS_2D = ("e00", "e10", "e01", "e20", "e02")
CENTRAL_MOMENTS_2D = ("dx1", "dy1", "dx2", "dy2")


def _first(p: OperatorParams, x: float) -> float:
    N = p.denominator
    return (2 * p.alpha + 1) / (2 * N) + p.n * x / N


def _second(p: OperatorParams, x: float) -> float:
    n, k, a = p.n, p.k, p.alpha
    N = p.denominator
    return (
        n * n / N**2 * (x * x + x * (1 - x) * (k + 1) / (n + k))
        + (2 * a + 1) * n * x / N**2
        + ((a + 1) ** 3 - a**3) / (3 * N**2)
    )


def moment_2d_closed(bp: BivariateParams, x: float, y: float, which: str) -> float:
    """Images of ``1, t, s, t^2, s^2`` (``e00 .. e02``)."""
    if which == "e00":
        return 1.0
    if which == "e10":
        return _first(bp.px, x)
    if which == "e01":
        return _first(bp.py, y)
    if which == "e20":
        return _second(bp.px, x)
    if which == "e02":
        return _second(bp.py, y)
    raise ValueError(f"unknown bivariate moment {which!r}; expected one of {', '.join(MOMENTS_2D)}")


def _central1(p: OperatorParams, x: float) -> float:
    N = p.denominator
    return (2 * p.alpha + 1) / (2 * N) - (p.beta + 1) * x / N


def _central2(p: OperatorParams, x: float) -> float:
    n, k, a, b = p.n, p.k, p.alpha, p.beta
    N = p.denominator
    return (
        x * (1 - x) * (n * n * (k + 1) / (n + k) - (b + 1) ** 2)
        + (b + 1) * (b - 2 * a) * x
        + ((a + 1) ** 3 - a**3) / 3
    ) / N**2


def central_moment_2d_closed(bp: BivariateParams, x: float, y: float, which: str) -> float:
    """Images of ``t-x``, ``s-y``, ``(t-x)^2``, ``(s-y)^2`` (``dx1, dy1, dx2, dy2``)."""
    if which == "dx1":
        return _central1(bp.px, x)
    if which == "dy1":
        return _central1(bp.py, y)
    if which == "dx2":
        return _central2(bp.px, x)
    if which == "dy2":
        return _central2(bp.py, y)
    raise ValueError(f"unknown central moment {which!r}; expected one of {', '.join(CENTRAL_MOMENTS_2D)}")


class GridModulus2D:
    """Complete and partial moduli of ``f`` sampled on a uniform square grid."""

    def __init__(self, f: BivariateFunctionSpec, grid_points: int = GRID_POINTS_2D):
        if grid_points < 2:
            raise ValueError("grid_points must be at least 2")
        self.grid_points = int(grid_points)
        self.h = 1.0 / (self.grid_points - 1)
        g = uniform_grid(self.grid_points)
        X, Y = np.meshgrid(g, g, indexing="ij")
        self.F = np.asarray(f(X, Y), dtype=float)
        self._offsets: dict[tuple[int, int], float] = {}

    def _shift_max(self, di: int, dj: int) -> float:
        key = (di, dj)
        if key not in self._offsets:
            F, G = self.F, self.grid_points
            a = F[di:, max(dj, 0):G + min(dj, 0)]
            b = F[:G - di, max(-dj, 0):G - max(dj, 0)]
            self._offsets[key] = float(np.max(np.abs(a - b))) if a.size else 0.0
        return self._offsets[key]

    def _reach(self, delta: float) -> int:
        if not delta > 0:
            raise ValueError(f"delta must be positive, got {delta!r}")
        return min(int(math.floor(delta / self.h + 1e-9)), self.grid_points - 1)

    def complete(self, delta: float) -> float:
        r = self._reach(delta)
        limit = (delta / self.h) ** 2 * (1 + 1e-12)
        best = 0.0
        for di in range(r + 1):
            for dj in range(-r, r + 1):
                if di * di + dj * dj <= limit and (di > 0 or dj > 0):
                    best = max(best, self._shift_max(di, dj))
        return best

    def partial(self, delta: float) -> tuple[float, float]:
        r = self._reach(delta)
        w1 = max((self._shift_max(d, 0) for d in range(1, r + 1)), default=0.0)
        w2 = max((self._shift_max(0, d) for d in range(1, r + 1)), default=0.0)
        return w1, w2


def complete_modulus_estimate(f: BivariateFunctionSpec, delta: float, grid_points: int = GRID_POINTS_2D) -> float:
    """Grid maximum of ``|f(t,s) - f(x,y)|`` over pairs at Euclidean distance ``<= delta``."""
    return GridModulus2D(f, grid_points).complete(delta)


def partial_moduli_estimate(
    f: BivariateFunctionSpec, delta: float, grid_points: int = GRID_POINTS_2D
) -> tuple[float, float]:
    """Grid partial moduli: the first moves ``x`` with ``y`` fixed, the second the reverse."""
    return GridModulus2D(f, grid_points).partial(delta)


def _xi_pair(bp: BivariateParams) -> tuple[float, float]:
    return xi_bound(bp.px), xi_bound(bp.py)


def bound_complete(
    f: BivariateFunctionSpec, bp: BivariateParams, x: float = 0.5, y: float = 0.5, grid_points: int = GRID_POINTS_2D
) -> float:
    """``2 omega~(f, sqrt(xi_1 + xi_2))``; uniform in ``(x, y)``."""
    xi1, xi2 = _xi_pair(bp)
    delta = math.sqrt(xi1 + xi2)
    if f.exact_complete_modulus is not None:
        return 2.0 * f.exact_complete_modulus(delta)
    return 2.0 * SAFETY_FACTOR * complete_modulus_estimate(f, delta, grid_points)


def bound_partial(
    f: BivariateFunctionSpec, bp: BivariateParams, x: float = 0.5, y: float = 0.5, grid_points: int = GRID_POINTS_2D
) -> float:
    """``2 (omega_1(f, sqrt(xi_1)) + omega_2(f, sqrt(xi_2)))``; uniform in ``(x, y)``."""
    xi1, xi2 = _xi_pair(bp)
    d1, d2 = math.sqrt(xi1), math.sqrt(xi2)
    if f.exact_partial_moduli is not None:
        w1, w2 = f.exact_partial_moduli(d1)[0], f.exact_partial_moduli(d2)[1]
    else:
        gm = GridModulus2D(f, grid_points)
        w1 = SAFETY_FACTOR * gm.partial(d1)[0]
        w2 = SAFETY_FACTOR * gm.partial(d2)[1]
    return 2.0 * (w1 + w2)


def axis_second_moment_sup(p: OperatorParams, grid_points: int = 1001) -> float:
    """Grid supremum of the axis second central moment (oracle values)."""
    return max(
        moment_oracle("kantorovich_stancu_k", p, float(x), 2, central=True) for x in uniform_grid(grid_points)
    )


def bound_lipschitz(spec: LipschitzSpec, bp: BivariateParams, grid_points: int = 1001) -> float:
    """``M lambda_1^{g1/2} lambda_2^{g2/2}`` with ``lambda_i`` the axis second-moment sup."""
    lam1 = axis_second_moment_sup(bp.px, grid_points)
    lam2 = lam1 if bp.py == bp.px else axis_second_moment_sup(bp.py, grid_points)
    return spec.M * lam1 ** (spec.gamma1 / 2) * lam2 ** (spec.gamma2 / 2)


def bound_grad(
    f: BivariateFunctionSpec, bp: BivariateParams, grid_points: int = GRID_POINTS_2D, moment_grid: int = 1001
) -> float:
    """``||f_x|| sqrt(lambda_1) + ||f_y|| sqrt(lambda_2)`` with grid sup norms."""
    if f.fx is None or f.fy is None:
        raise ValueError(f"function {f.name!r} carries no first partials")
    g = uniform_grid(grid_points)
    X, Y = np.meshgrid(g, g, indexing="ij")
    nx = float(np.max(np.abs(f.fx(X, Y))))
    ny = float(np.max(np.abs(f.fy(X, Y))))
    lam1 = axis_second_moment_sup(bp.px, moment_grid)
    lam2 = lam1 if bp.py == bp.px else axis_second_moment_sup(bp.py, moment_grid)
    return nx * math.sqrt(lam1) + ny * math.sqrt(lam2)


def voronovskaja_rhs_2d(f: BivariateFunctionSpec, bp: BivariateParams, x: float, y: float) -> float:
    if None in (f.fx, f.fy, f.fxx, f.fyy):
        raise ValueError(f"function {f.name!r} needs first and pure second partials")
    px, py = bp.px, bp.py
    X, Y = np.array([x]), np.array([y])
    fx, fy = float(f.fx(X, Y)[0]), float(f.fy(X, Y)[0])
    fxx, fyy = float(f.fxx(X, Y)[0]), float(f.fyy(X, Y)[0])
    return (
        (px.alpha + 0.5 - (px.beta + 1) * x) * fx
        + (py.alpha + 0.5 - (py.beta + 1) * y) * fy
        + 0.5 * (px.k + 1) * x * (1 - x) * fxx
        + 0.5 * (py.k + 1) * y * (1 - y) * fyy
    )


@dataclass(frozen=True)
class Voronovskaja2DReport:
    x: float
    y: float
    params: BivariateParams
    n_sequence: tuple
    scaled_error: tuple
    limit: float
    gaps: tuple

    CSV_HEADER = ("n", "x", "y", "scaled_error", "limit", "gap")

    def gaps_decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.gaps, self.gaps[1:]))

    def final_gap_ok(self, rel: float = 0.02) -> bool:
        return self.gaps[-1] < rel * max(1.0, abs(self.limit))

    def to_csv(self) -> str:
        rows = ((n, self.x, self.y, s, self.limit, g) for n, s, g in zip(self.n_sequence, self.scaled_error, self.gaps))
        return csv_text(self.CSV_HEADER, rows)

    def to_json(self) -> str:
        return json_text(asdict(self))


def voronovskaja_probe_2d(
    f: BivariateFunctionSpec,
    bp: BivariateParams,
    x: float,
    y: float,
    n_sequence: Sequence[int] = doubling_sequence(),
    quad: Optional[QuadratureRule] = None,
) -> Voronovskaja2DReport:
    """``n (K_{n,n} f - f)(x, y)`` along ``n_sequence`` with both degrees equal to ``n``."""
    if not (0 < x < 1 and 0 < y < 1):
        raise ValueError("the Voronovskaja probe needs an interior point")
    limit = voronovskaja_rhs_2d(f, bp, x, y)
    fxy = float(f(np.array([x]), np.array([y]))[0])
    scaled = tuple(n * (eval_2d(f, bp.with_n(n), x, y, quad) - fxy) for n in n_sequence)
    gaps = tuple(abs(s - limit) for s in scaled)
    return Voronovskaja2DReport(float(x), float(y), bp, tuple(int(n) for n in n_sequence), scaled, limit, gaps)


def cross_term(bp: BivariateParams, x: float, y: float, quad: Optional[QuadratureRule] = None) -> float:
    """``K((t - x)(s - y); x, y)`` through the bivariate operator."""
    g = BivariateFunctionSpec("cross", lambda t, s: (t - x) * (s - y))
    return eval_2d(g, bp, x, y, quad)
