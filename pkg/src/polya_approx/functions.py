"""Named test functions with analytic derivatives.

Every ``eval`` rule is vectorised over numpy arrays. Derivatives feed the
Voronovskaja probes and the C^1 bounds; ``exact_modulus`` is set only where
the modulus of continuity is known in closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = [
    "FunctionSpec",
    "BivariateFunctionSpec",
    "CATALOG",
    "CATALOG_2D",
    "get_function",
    "get_function_2d",
    "monomial",
    "separable",
]

PI = math.pi
Rule = Callable[[np.ndarray], np.ndarray]
Rule2 = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FunctionSpec:
    name: str
    eval: Rule
    d1: Optional[Rule] = None
    d2: Optional[Rule] = None
    exact_modulus: Optional[Callable[[float], float]] = None
    description: str = ""

    def __call__(self, x):
        return self.eval(np.asarray(x, dtype=float))

    def scaled(self, a: float, name: Optional[str] = None) -> "FunctionSpec":
        return _combine(self, None, a, 0.0, name or f"{a}*{self.name}")

    def combine(self, other: "FunctionSpec", a: float, b: float, name: Optional[str] = None) -> "FunctionSpec":
        """The linear combination ``a*self + b*other``."""
        return _combine(self, other, a, b, name or f"{a}*{self.name}+{b}*{other.name}")


def _combine(f, g, a, b, name):
    def lin(rf, rg):
        if rf is None or (g is not None and rg is None):
            return None
        if g is None:
            return lambda x: a * rf(x)
        return lambda x: a * rf(x) + b * rg(x)

    return FunctionSpec(
        name=name,
        eval=lin(f.eval, g.eval if g else None),
        d1=lin(f.d1, g.d1 if g else None),
        d2=lin(f.d2, g.d2 if g else None),
    )


def monomial(j: int) -> FunctionSpec:
    if j < 0:
        raise ValueError("monomial degree must be nonnegative")

    def power(p):
        if p < 0:
            return lambda x: np.zeros_like(x)
        return lambda x: np.ones_like(x) if p == 0 else x**p

    exact = None
    if j == 0:
        exact = lambda d: 0.0
    elif j == 1:
        exact = lambda d: min(d, 1.0)
    return FunctionSpec(
        name=f"e{j}",
        eval=power(j),
        d1=lambda x, p=power(j - 1): j * p(x),
        d2=lambda x, p=power(j - 2): j * (j - 1) * p(x),
        exact_modulus=exact,
        description=f"t^{j}",
    )


def _f1(x):
    return 20 * x**6 + 3 * x**3 - 5 * x**2 + 2 * x


def _f2(x):
    return np.sin(6 * PI * x) + 5 * np.sin(PI * x / 3)


def _f3(x):
    return np.sin(2 * PI * x) + 2 * np.sin(PI * x / 2)


def _f4(x):
    return x**3 * np.sin(4 * PI * x)


def _f4_d1(x):
    return 3 * x**2 * np.sin(4 * PI * x) + 4 * PI * x**3 * np.cos(4 * PI * x)


def _f4_d2(x):
    s, c = np.sin(4 * PI * x), np.cos(4 * PI * x)
    return 6 * x * s + 24 * PI * x**2 * c - 16 * PI**2 * x**3 * s


def _f5(x):
    return 2 * x**2 * np.sin(2 * PI * x)


def _f5_d1(x):
    return 4 * x * np.sin(2 * PI * x) + 4 * PI * x**2 * np.cos(2 * PI * x)


def _f5_d2(x):
    s, c = np.sin(2 * PI * x), np.cos(2 * PI * x)
    return 4 * s + 16 * PI * x * c - 8 * PI**2 * x**2 * s


def _f6(x):
    return x**5 * (x - 0.25) * np.sin(PI * x)


def _f6_d1(x):
    u = x**6 - x**5 / 4
    du = 6 * x**5 - 1.25 * x**4
    return du * np.sin(PI * x) + PI * u * np.cos(PI * x)


def _f6_d2(x):
    u = x**6 - x**5 / 4
    du = 6 * x**5 - 1.25 * x**4
    ddu = 30 * x**4 - 5 * x**3
    s, c = np.sin(PI * x), np.cos(PI * x)
    return ddu * s + 2 * PI * du * c - PI**2 * u * s


def _build_catalog() -> dict[str, FunctionSpec]:
    cat = {f"e{j}": monomial(j) for j in range(5)}
    cat["f1"] = FunctionSpec(
        "f1", _f1,
        d1=lambda x: 120 * x**5 + 9 * x**2 - 10 * x + 2,
        d2=lambda x: 600 * x**4 + 18 * x - 10,
        description="20x^6 + 3x^3 - 5x^2 + 2x",
    )
    cat["f2"] = FunctionSpec(
        "f2", _f2,
        d1=lambda x: 6 * PI * np.cos(6 * PI * x) + (5 * PI / 3) * np.cos(PI * x / 3),
        d2=lambda x: -36 * PI**2 * np.sin(6 * PI * x) - (5 * PI**2 / 9) * np.sin(PI * x / 3),
        description="sin(6 pi x) + 5 sin(pi x / 3)",
    )
    cat["f3"] = FunctionSpec(
        "f3", _f3,
        d1=lambda x: 2 * PI * np.cos(2 * PI * x) + PI * np.cos(PI * x / 2),
        d2=lambda x: -4 * PI**2 * np.sin(2 * PI * x) - (PI**2 / 2) * np.sin(PI * x / 2),
        description="sin(2 pi x) + 2 sin(pi x / 2)",
    )
    cat["f4"] = FunctionSpec("f4", _f4, _f4_d1, _f4_d2, description="x^3 sin(4 pi x)")
    cat["f5"] = FunctionSpec("f5", _f5, _f5_d1, _f5_d2, description="2x^2 sin(2 pi x)")
    cat["f6"] = FunctionSpec("f6", _f6, _f6_d1, _f6_d2, description="x^5 (x - 1/4) sin(pi x)")
    cat["abs_half"] = FunctionSpec(
        "abs_half",
        lambda x: np.abs(x - 0.5),
        exact_modulus=lambda d: min(d, 0.5),
        description="|x - 1/2|",
    )
    return cat


CATALOG: dict[str, FunctionSpec] = _build_catalog()


def get_function(name: str) -> FunctionSpec:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown function {name!r}; known: {', '.join(CATALOG)}") from None


@dataclass(frozen=True)
class BivariateFunctionSpec:
    name: str
    eval: Rule2
    fx: Optional[Rule2] = None
    fy: Optional[Rule2] = None
    fxx: Optional[Rule2] = None
    fyy: Optional[Rule2] = None
    fxy: Optional[Rule2] = None
    exact_complete_modulus: Optional[Callable[[float], float]] = None
    exact_partial_moduli: Optional[Callable[[float], tuple[float, float]]] = None
    description: str = ""

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self.eval(x, y)


def separable(g: FunctionSpec, h: FunctionSpec) -> BivariateFunctionSpec:
    """The tensor product ``(x, y) -> g(x) h(y)``."""

    def prod(a, b):
        if a is None or b is None:
            return None
        return lambda x, y: a(x) * b(y)

    return BivariateFunctionSpec(
        name=f"{g.name}*{h.name}",
        eval=lambda x, y: g.eval(x) * h.eval(y),
        fx=prod(g.d1, h.eval),
        fy=prod(g.eval, h.d1),
        fxx=prod(g.d2, h.eval),
        fyy=prod(g.eval, h.d2),
        fxy=prod(g.d1, h.d1),
        description=f"({g.description or g.name}) * ({h.description or h.name})",
    )


def _zero2(x, y):
    return np.zeros(np.broadcast(x, y).shape)


def _const2(c):
    return lambda x, y: np.full(np.broadcast(x, y).shape, float(c))


def _f7(x, y):
    return 2 * x**2 * y * np.cos(2.5 * PI * x)


def _f7_fx(x, y):
    c, s = np.cos(2.5 * PI * x), np.sin(2.5 * PI * x)
    return 4 * x * y * c - 5 * PI * x**2 * y * s


def _f7_fxx(x, y):
    c, s = np.cos(2.5 * PI * x), np.sin(2.5 * PI * x)
    return 4 * y * c - 20 * PI * x * y * s - 12.5 * PI**2 * x**2 * y * c


def _f7_fxy(x, y):
    c, s = np.cos(2.5 * PI * x), np.sin(2.5 * PI * x)
    return 4 * x * c - 5 * PI * x**2 * s


def _f8(x, y):
    return 2 * x * np.cos(3 * PI * (x + y))


def _f8_fx(x, y):
    c, s = np.cos(3 * PI * (x + y)), np.sin(3 * PI * (x + y))
    return 2 * c - 6 * PI * x * s


def _f8_fxx(x, y):
    c, s = np.cos(3 * PI * (x + y)), np.sin(3 * PI * (x + y))
    return -12 * PI * s - 18 * PI**2 * x * c


def _f8_fxy(x, y):
    c, s = np.cos(3 * PI * (x + y)), np.sin(3 * PI * (x + y))
    return -6 * PI * s - 18 * PI**2 * x * c


def _f9_u(x):
    return x**6 - x**5 / 4


def _f9_du(x):
    return 6 * x**5 - 1.25 * x**4


def _build_catalog_2d() -> dict[str, BivariateFunctionSpec]:
    cat: dict[str, BivariateFunctionSpec] = {}
    cat["e00"] = BivariateFunctionSpec(
        "e00", _const2(1.0), _zero2, _zero2, _zero2, _zero2, _zero2,
        exact_complete_modulus=lambda d: 0.0,
        exact_partial_moduli=lambda d: (0.0, 0.0),
        description="1",
    )
    one = _const2(1.0)
    cat["e10"] = BivariateFunctionSpec(
        "e10", lambda x, y: x + 0.0 * y, one, _zero2, _zero2, _zero2, _zero2,
        exact_complete_modulus=lambda d: min(d, 1.0),
        exact_partial_moduli=lambda d: (min(d, 1.0), 0.0),
        description="x",
    )
    cat["e01"] = BivariateFunctionSpec(
        "e01", lambda x, y: y + 0.0 * x, _zero2, one, _zero2, _zero2, _zero2,
        exact_complete_modulus=lambda d: min(d, 1.0),
        exact_partial_moduli=lambda d: (0.0, min(d, 1.0)),
        description="y",
    )
    cat["e20"] = BivariateFunctionSpec(
        "e20", lambda x, y: x**2 + 0.0 * y, lambda x, y: 2 * x + 0.0 * y, _zero2,
        _const2(2.0), _zero2, _zero2, description="x^2",
    )
    cat["e02"] = BivariateFunctionSpec(
        "e02", lambda x, y: y**2 + 0.0 * x, _zero2, lambda x, y: 2 * y + 0.0 * x,
        _zero2, _const2(2.0), _zero2, description="y^2",
    )
    cat["e11"] = BivariateFunctionSpec(
        "e11", lambda x, y: x * y, lambda x, y: y + 0.0 * x, lambda x, y: x + 0.0 * y,
        _zero2, _zero2, one, description="xy",
    )
    cat["sum_sq"] = BivariateFunctionSpec(
        "sum_sq", lambda x, y: x**2 + y**2, lambda x, y: 2 * x + 0.0 * y,
        lambda x, y: 2 * y + 0.0 * x, _const2(2.0), _const2(2.0), _zero2,
        description="x^2 + y^2",
    )
    cat["x_plus_y"] = BivariateFunctionSpec(
        "x_plus_y", lambda x, y: x + y, one, one, _zero2, _zero2, _zero2,
        exact_complete_modulus=lambda d: min(d * math.sqrt(2.0), 2.0),
        exact_partial_moduli=lambda d: (min(d, 1.0), min(d, 1.0)),
        description="x + y",
    )
    cat["abs_half_x"] = BivariateFunctionSpec(
        "abs_half_x", lambda x, y: np.abs(x - 0.5) + 0.0 * y,
        exact_complete_modulus=lambda d: min(d, 0.5),
        exact_partial_moduli=lambda d: (min(d, 0.5), 0.0),
        description="|x - 1/2|",
    )
    cat["abs_prod"] = BivariateFunctionSpec(
        "abs_prod", lambda x, y: np.abs(x - 0.5) * np.abs(y - 0.5),
        description="|x - 1/2| |y - 1/2|",
    )
    cat["f7"] = BivariateFunctionSpec(
        "f7", _f7, _f7_fx, lambda x, y: 2 * x**2 * np.cos(2.5 * PI * x) + 0.0 * y,
        _f7_fxx, _zero2, _f7_fxy, description="2x^2 y cos(5 pi x / 2)",
    )
    cat["f8"] = BivariateFunctionSpec(
        "f8", _f8, _f8_fx, lambda x, y: -6 * PI * x * np.sin(3 * PI * (x + y)),
        _f8_fxx, lambda x, y: -18 * PI**2 * x * np.cos(3 * PI * (x + y)), _f8_fxy,
        description="2x cos(3 pi (x + y))",
    )
    cat["f9"] = BivariateFunctionSpec(
        "f9",
        lambda x, y: 7 * _f9_u(x) * np.sin(2 * PI * y),
        lambda x, y: 7 * _f9_du(x) * np.sin(2 * PI * y),
        lambda x, y: 14 * PI * _f9_u(x) * np.cos(2 * PI * y),
        lambda x, y: 7 * (30 * x**4 - 5 * x**3) * np.sin(2 * PI * y),
        lambda x, y: -28 * PI**2 * _f9_u(x) * np.sin(2 * PI * y),
        lambda x, y: 14 * PI * _f9_du(x) * np.cos(2 * PI * y),
        description="7x^5 (x - 1/4) sin(2 pi y)",
    )
    return cat


CATALOG_2D: dict[str, BivariateFunctionSpec] = _build_catalog_2d()


def get_function_2d(name: str) -> BivariateFunctionSpec:
    """Look up a bivariate catalog entry; ``g*h`` builds a separable product."""
    if name in CATALOG_2D:
        return CATALOG_2D[name]
    if "*" in name:
        g, h = name.split("*", 1)
        return separable(get_function(g), get_function(h))
    raise KeyError(f"unknown bivariate function {name!r}; known: {', '.join(CATALOG_2D)} or g*h")
