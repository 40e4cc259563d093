"""Frozen plot configurations and the tables derived from them.

Figures 1-6 are univariate (one function, several operator curves), figures
7-9 are surfaces on the unit square. Example ids ``2.1 .. 2.6`` map to figures
1-6 and ``3.10 .. 3.12`` to figures 7-9.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .analysis import convergence_table
from .bivariate import BivariateParams, bound_complete, eval_2d_grid, eval_d_star_2d_grid
from .core import QuadratureRule, uniform_grid
from .functions import get_function, get_function_2d
from .operators import OperatorParams, values_on_grid
from .reporting import csv_text

__all__ = [
    "Curve",
    "Figure1D",
    "Surface",
    "Figure2D",
    "FIGURES",
    "EXAMPLES",
    "figure_rows",
    "figure_csv",
    "example_reports",
    "Bivariate2DRow",
    "SURFACE_CSV_DEFAULT_POINTS",
]

SURFACE_CSV_DEFAULT_POINTS = 21


@dataclass(frozen=True)
class Curve:
    label: str
    tag: str
    params: OperatorParams


@dataclass(frozen=True)
class Figure1D:
    number: int
    example: str
    function: str
    curves: tuple


@dataclass(frozen=True)
class Surface:
    label: str
    tag: str  # kantorovich_stancu_k or d_star
    params: BivariateParams


@dataclass(frozen=True)
class Figure2D:
    number: int
    example: str
    function: str
    surfaces: tuple


P = OperatorParams
B = BivariateParams.equal

FIGURES: dict[int, Union[Figure1D, Figure2D]] = {
    1: Figure1D(1, "2.1", "f1", (
        Curve("lupas_k(k=0.1)", "lupas_k", P(10, 0.1)),
        Curve("lupas", "lupas", P(10, 1.0)),
        Curve("bernstein", "bernstein", P(10, 0.0)),
    )),
    2: Figure1D(2, "2.2", "f2", tuple(
        Curve(f"lupas_k(n={n})", "lupas_k", P(n, 0.5)) for n in (10, 50, 100)
    )),
    3: Figure1D(3, "2.3", "f3", tuple(
        Curve(f"lupas_k(k={k})", "lupas_k", P(10, k)) for k in (0.1, 0.3, 0.6, 1.0, 3.0)
    )),
    4: Figure1D(4, "2.4", "f4", (
        Curve("K(k=0.2)", "kantorovich_stancu_k", P(50, 0.2)),
        Curve("D*", "d_star", P(50, 1.0)),
        Curve("bernstein_kantorovich", "bernstein_kantorovich", P(50, 0.0)),
    )),
    5: Figure1D(5, "2.5", "f5", tuple(
        Curve(f"K(n={n})", "kantorovich_stancu_k", P(n, 0.3)) for n in (30, 90, 150)
    )),
    6: Figure1D(6, "2.6", "f6", tuple(
        Curve(f"K(k={k})", "kantorovich_stancu_k", P(20, k, 1.0, 1.0)) for k in (0.3, 0.6, 0.9, 1.2, 1.5)
    )),
    7: Figure2D(7, "3.10", "f7", (
        Surface("K(k=0.2)", "kantorovich_stancu_k", B(10, 0.2)),
        Surface("D*", "d_star", B(10, 1.0)),
    )),
    8: Figure2D(8, "3.11", "f8", tuple(
        Surface(f"K(n={n})", "kantorovich_stancu_k", B(n, 0.4)) for n in (10, 20, 40)
    )),
    9: Figure2D(9, "3.12", "f9", tuple(
        Surface(f"K(k={k})", "kantorovich_stancu_k", B(10, k)) for k in (0.3, 0.9, 1.2)
    )),
}
EXAMPLES = {fig.example: number for number, fig in FIGURES.items()}


def _lookup(number: int):
    try:
        return FIGURES[int(number)]
    except (KeyError, ValueError):
        raise ValueError(f"unknown figure id {number!r}; expected 1..9") from None


def _surface_values(fn, s: Surface, xs, ys, quad):
    if s.tag == "d_star":
        return eval_d_star_2d_grid(fn, s.params.px.n, s.params.py.n, xs, ys, quad)
    return eval_2d_grid(fn, s.params, xs, ys, quad)


def figure_rows(number: int, grid_points: Optional[int] = None, quad: Optional[QuadratureRule] = None):
    """Header and rows re-plotting the figure: ``x, f, curves..`` or ``x, y, f, surfaces..``."""
    fig = _lookup(number)
    if isinstance(fig, Figure1D):
        xs = uniform_grid(grid_points or 1001)
        f = get_function(fig.function)
        cols = [xs, f(xs)] + [values_on_grid(f, c.tag, c.params, xs, quad) for c in fig.curves]
        header = ["x", fig.function] + [c.label for c in fig.curves]
        return header, list(zip(*cols))
    g = uniform_grid(grid_points or SURFACE_CSV_DEFAULT_POINTS)
    fn = get_function_2d(fig.function)
    X, Y = np.meshgrid(g, g, indexing="ij")
    surfaces = [_surface_values(fn, s, g, g, quad) for s in fig.surfaces]
    cols = [X.ravel(), Y.ravel(), fn(X, Y).ravel()] + [v.ravel() for v in surfaces]
    header = ["x", "y", fig.function] + [s.label for s in fig.surfaces]
    return header, list(zip(*cols))


def figure_csv(number: int, grid_points: Optional[int] = None, quad: Optional[QuadratureRule] = None) -> str:
    header, rows = figure_rows(number, grid_points, quad)
    return csv_text(header, rows)


@dataclass(frozen=True)
class Bivariate2DRow:
    function: str
    label: str
    params: BivariateParams
    sup_error: float
    bound: float


def example_reports(example: str, grid_points: Optional[int] = None, quad: Optional[QuadratureRule] = None):
    """Sup-error tables for an Example id.

    Univariate examples return ``ConvergenceReport`` objects, one per operator
    tag in order of appearance; bivariate ones return ``Bivariate2DRow``
    entries with the complete-modulus bound.
    """
    if example not in EXAMPLES:
        raise ValueError(f"unknown example {example!r}; expected one of {', '.join(EXAMPLES)}")
    fig = FIGURES[EXAMPLES[example]]
    if isinstance(fig, Figure1D):
        f = get_function(fig.function)
        groups: dict[str, list] = {}
        for c in fig.curves:
            groups.setdefault(c.tag, []).append(c.params)
        return [convergence_table(f, tag, sweep, grid_points or 1001, quad) for tag, sweep in groups.items()]
    fn = get_function_2d(fig.function)
    g = uniform_grid(grid_points or 51)
    X, Y = np.meshgrid(g, g, indexing="ij")
    exact = fn(X, Y)
    out = []
    for s in fig.surfaces:
        err = float(np.max(np.abs(_surface_values(fn, s, g, g, quad) - exact)))
        out.append(Bivariate2DRow(fig.function, s.label, s.params, err, bound_complete(fn, s.params)))
    return out

