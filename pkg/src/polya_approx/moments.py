"""Moments of the Lupas-k and Kantorovich-Stancu-k operators.

Closed forms are transcribed as rational expressions in ``n, k, alpha, beta``.
The oracle never touches them: it sums the weight row against node powers
(point operators) or against exact cell averages of ``t**j`` (Kantorovich
operators), in double precision or, for ``n <= 60``, in mpmath.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from .core import EXTENDED_MAX_N, compensated_sum, polya_weight_row, polya_weight_row_extended
from .operators import OperatorParams

__all__ = [
    "MomentReport",
    "MOMENT_CSV_HEADER",
    "KINDS",
    "tolerance_for",
    "moment_lupas_closed",
    "central_moment_lupas_closed",
    "moment_kant_closed",
    "central_moment_kant_closed",
    "closed_form",
    "moment_oracle",
    "fourth_central_kant_oracle",
    "moment_report",
    "xi_bound",
    "voronovskaja_rhs_1d",
    "limit_central_kant",
]

# kind -> (operator family, central?)
KINDS = {
    "lupas": ("lupas_k", False),
    "lupas_central": ("lupas_k", True),
    "kant": ("kantorovich_stancu_k", False),
    "kant_central": ("kantorovich_stancu_k", True),
}
MOMENT_CSV_HEADER = ("n", "k", "alpha", "beta", "x", "order", "kind", "closed", "oracle", "diff", "flag")


def tolerance_for(order: int) -> float:
    """Absolute tolerance: tight through order 2, looser for orders 3-4."""
    return 1e-10 if order <= 2 else 1e-8


def _check_order(j: int, allowed):
    if j not in allowed:
        raise ValueError(f"order must be one of {sorted(allowed)}, got {j!r}")


def moment_lupas_closed(n: int, k: float, x: float, j: int) -> float:
    """``P_{n,k}(e_j; x)`` for ``j = 0..4``."""
    _check_order(j, range(5))
    q = x * (1.0 - x)
    d1 = n + k
    d2 = d1 * (n + 2 * k)
    d3 = d2 * (n + 3 * k)
    if j == 0:
        return 1.0
    if j == 1:
        return x
    if j == 2:
        return x * x + (k + 1) * q / d1
    if j == 3:
        return (
            x**3
            + (3 * n + 2 * k - 2) * (k + 1) * x * q / d2
            + (2 * k + 1) * (k + 1) * q / d2
        )
    return (
        x**4
        + (k + 1) * ((11 * n - 6) * (k - 1) + 6 * (n * n + k * k)) * x * x * q / d3
        + (k + 1) * (7 * n + 11 * n * k + 6 * (k * k - k - 1)) * x * q / d3
        + (k + 1) * (n - k + 6 * n * k * (k + 1)) * q / (n * d3)
    )


def central_moment_lupas_closed(n: int, k: float, x: float, order: int) -> float:
    """``P_{n,k}((e_1 - x)^order; x)`` for ``order`` in 2, 3, 4."""
    _check_order(order, (2, 3, 4))
    q = x * (1.0 - x)
    d1 = n + k
    d2 = d1 * (n + 2 * k)
    if order == 2:
        return (k + 1) * q / d1
    if order == 3:
        return (k + 1) * (2 * k + 1) * q * (1 - 2 * x) / d2
    d3 = n * d2 * (n + 3 * k)
    return (
        (k + 1) * 3 * n * (-2 + n + k * (-6 - 6 * k + n)) * q * q / d3
        + (k + 1) * (n + k * (-1 + 6 * (k + 1) * n)) * q / d3
    )


def moment_kant_closed(p: OperatorParams, x: float, j: int) -> float:
    """``K_n^{(alpha,beta,k)}(e_j; x)`` for ``j = 0..4``."""
    _check_order(j, range(5))
    n, k, a = p.n, p.k, p.alpha
    N = p.denominator
    if j == 0:
        return 1.0
    if j == 1:
        return n * x / N + (2 * a + 1) / (2 * N)
    d1 = n + k
    if j == 2:
        return (
            n * n * (n - 1) * x * x / (N**2 * d1)
            + ((2 * a + 2 + k) * n + (2 * a + 1) * k) * n * x / (N**2 * d1)
            + (3 * a * a + 3 * a + 1) / (3 * N**2)
        )
    d2 = d1 * (n + 2 * k)
    if j == 3:
        c1 = (
            4 * (1 + 3 * a * (1 + a)) * k * k * n
            + 6 * k * (2 + k + a * (5 + 3 * a + 2 * k)) * n**2
            + (7 + 6 * a * a + 6 * a * (2 + k) + k * (9 + 4 * k)) * n**3
        )
        return (
            (n - 1) * (n - 2) * n**3 * x**3 / (N**3 * d2)
            + 3 * n * n * (n - 1) * ((3 + 2 * a + 2 * k) * n + 2 * (1 + 2 * a) * k) * x * x / (2 * N**3 * d2)
            + c1 * x / (2 * N**3 * d2)
            + (4 * a**3 + 6 * a * a + 4 * a + 1) / (4 * N**3)
        )
    D = N**4 * d2 * (n + 3 * k)
    c2 = (
        -12 * (1 + 3 * a * (1 + a)) * k * k * n**2
        + k * (-27 - 5 * k + 6 * a * (-11 + a * (-5 + 6 * k))) * n**3
        + 3 * (-5 - 2 * a * (3 + a) + k + 2 * a * (9 + 5 * a) * k + 2 * (1 + 6 * a) * k * k) * n**4
        + (15 + 6 * a * a + 6 * a * (3 + 2 * k) + k * (24 + 11 * k)) * n**5
    )
    c1 = (
        6 * (1 + 2 * a * (2 + a * (3 + 2 * a))) * k**3 * n
        + k * k * (23 + 12 * k + 2 * a * (40 + 51 * a + 22 * a * a + 18 * (1 + a) * k)) * n**2
        + 3 * k * (7 + 22 * a + 22 * a * a + 8 * a**3 + 9 * k + 22 * a * k + 10 * a * a * k + 4 * k * k + 8 * a * k * k) * n**3
        + (6 + 2 * a * (7 + 2 * a * (3 + a)) + 15 * k + 6 * a * (3 + a) * k + 8 * (2 + a) * k * k + 6 * k**3) * n**4
    )
    return (
        (n - 1) * (n - 2) * (n - 3) * n**4 * x**4 / D
        + 2 * n**3 * (n - 1) * (n - 2) * ((4 + 2 * a + 3 * k) * n + 3 * (1 + 2 * a) * k) * x**3 / D
        + c2 * x * x / D
        + c1 * x / D
        + (5 * a**4 + 10 * a**3 + 10 * a * a + 5 * a + 1) / (5 * N**4)
    )


def central_moment_kant_closed(p: OperatorParams, x: float, order: int) -> float:
    """``K_n^{(alpha,beta,k)}((e_1 - x)^order; x)`` for ``order`` in 1, 2."""
    _check_order(order, (1, 2))
    n, k, a, b = p.n, p.k, p.alpha, p.beta
    N = p.denominator
    if order == 1:
        return (2 * a + 1) / (2 * N) - (b + 1) * x / N
    d1 = n + k
    return (
        ((b + 1) ** 2 * d1 - (k + 1) * n * n) * x * x / (N**2 * d1)
        + ((k + 1) * n * n - (1 + 2 * a) * (b + 1) * d1) * x / (N**2 * d1)
        + (3 * a * a + 3 * a + 1) / (3 * N**2)
    )


def closed_form(kind: str, p: OperatorParams, x: float, order: int) -> float:
    if kind == "lupas":
        return moment_lupas_closed(p.n, p.k, x, order)
    if kind == "lupas_central":
        return central_moment_lupas_closed(p.n, p.k, x, order)
    if kind == "kant":
        return moment_kant_closed(p, x, order)
    if kind == "kant_central":
        return central_moment_kant_closed(p, x, order)
    raise ValueError(f"unknown moment kind {kind!r}; expected one of {', '.join(KINDS)}")


def _cell_power_means(lo, hi, j):
    """Exact mean of ``t**j`` over ``[lo, hi]``: ``sum_i hi^i lo^(j-i) / (j+1)``.

    This is the antiderivative difference divided by the width, written
    without the subtraction so that narrow cells lose no digits.
    """
    total = 0
    for i in range(j + 1):
        total = total + hi**i * lo ** (j - i)
    return total / (j + 1)


def moment_oracle(
    tag: str,
    p: OperatorParams,
    x: float,
    order: int,
    central: bool = False,
    extended: bool = False,
) -> float:
    """Moment by direct summation over the weight row.

    ``tag`` is ``lupas_k`` (nodes ``m/n``) or ``kantorovich_stancu_k`` (cells
    ``[(m+alpha)/(n+beta+1), (m+alpha+1)/(n+beta+1)]``). With ``central`` the
    integrand is ``(t - x)**order``. ``extended`` switches to mpmath at 50
    digits and requires ``n <= 60``.
    """
    if order < 0 or int(order) != order:
        raise ValueError("order must be a nonnegative integer")
    if tag not in ("lupas_k", "kantorovich_stancu_k"):
        raise ValueError(f"moment oracle supports lupas_k and kantorovich_stancu_k, got {tag!r}")
    n = p.n
    if extended:
        if n > EXTENDED_MAX_N:
            raise ValueError(f"extended oracle supports n <= {EXTENDED_MAX_N}, got {n}")
        with mpmath.workdps(50):
            w = polya_weight_row_extended(n, p.k, x)
            shift = mpmath.mpf(x) if central else mpmath.mpf(0)
            m = [mpmath.mpf(i) for i in range(n + 1)]
            if tag == "lupas_k":
                vals = [(mi / n - shift) ** order for mi in m]
            else:
                N = n + mpmath.mpf(p.beta) + 1
                a = mpmath.mpf(p.alpha)
                vals = [
                    _cell_power_means((mi + a) / N - shift, (mi + a + 1) / N - shift, order)
                    for mi in m
                ]
            return float(mpmath.fsum(wi * vi for wi, vi in zip(w, vals)))
    w = polya_weight_row(n, p.k, x).weights
    shift = x if central else 0.0
    m = np.arange(n + 1, dtype=float)
    if tag == "lupas_k":
        vals = (m / n - shift) ** order
    else:
        N = p.denominator
        vals = _cell_power_means((m + p.alpha) / N - shift, (m + p.alpha + 1) / N - shift, order)
    return compensated_sum(w * vals)


def fourth_central_kant_oracle(p: OperatorParams, x: float) -> float:
    """``K((e_1 - x)^4; x)`` by direct summation; of order ``1/n^2``."""
    return moment_oracle("kantorovich_stancu_k", p, x, 4, central=True)


@dataclass(frozen=True)
class MomentReport:
    params: OperatorParams
    x: float
    order: int
    kind: str
    closed_form: float
    oracle: float
    abs_diff: float
    flagged: bool

    def csv_row(self) -> tuple:
        p = self.params
        return (p.n, p.k, p.alpha, p.beta, self.x, self.order, self.kind,
                self.closed_form, self.oracle, self.abs_diff, int(self.flagged))


def moment_report(kind: str, p: OperatorParams, x: float, order: int, extended: bool = False) -> MomentReport:
    """Closed form against oracle, flagged when the gap exceeds the order's tolerance."""
    if kind not in KINDS:
        raise ValueError(f"unknown moment kind {kind!r}; expected one of {', '.join(KINDS)}")
    tag, central = KINDS[kind]
    closed = closed_form(kind, p, x, order)
    oracle = moment_oracle(tag, p, x, order, central=central, extended=extended)
    diff = abs(closed - oracle)
    return MomentReport(p, float(x), int(order), kind, closed, oracle, diff, not diff <= tolerance_for(order))


def xi_bound(p: OperatorParams) -> float:
    """Uniform upper bound on ``K((e_1 - x)^2; x)`` over ``x`` in ``[0, 1]``."""
    a = p.alpha
    return ((p.k + 1) / 4 + p.beta + 2 * a + ((a + 1) ** 3 - a**3) / 3) / p.denominator


def voronovskaja_rhs_1d(p: OperatorParams, x: float, f1: float, f2: float) -> float:
    """Limit of ``n (K_n f - f)(x)`` given ``f'(x) = f1`` and ``f''(x) = f2``."""
    return 0.5 * ((2 * p.alpha + 1 - 2 * (p.beta + 1) * x) * f1 + (p.k + 1) * x * (1 - x) * f2)


def limit_central_kant(p: OperatorParams, x: float, order: int) -> float:
    """Limits of ``n K((e_1-x); x)``, ``n K((e_1-x)^2; x)`` and ``n^2 K((e_1-x)^4; x)``."""
    _check_order(order, (1, 2, 4))
    if order == 1:
        return p.alpha + 0.5 - (p.beta + 1) * x
    if order == 2:
        return (p.k + 1) * x * (1 - x)
    return 3 * (p.k + 1) ** 2 * x * x * (1 - x) ** 2
