"""Command-line interface: ``polya-approx <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
Output is CSV (one header row, 17 significant digits) or JSON, written to
``--out`` or stdout, and is byte-identical for identical arguments.
"""
from __future__ import annotations

import argparse
import itertools
import sys
from dataclasses import asdict
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .analysis import convergence_table, doubling_sequence, voronovskaja_probe
from .bivariate import BivariateParams, eval_2d, eval_2d_grid, eval_d_star_2d, eval_d_star_2d_grid
from .core import EXTENDED_MAX_N, gauss_legendre, uniform_grid
from .figures import FIGURES, Figure2D, example_reports, figure_rows
from .functions import get_function, get_function_2d
from .moments import KINDS, MOMENT_CSV_HEADER, moment_report
from .operators import OPERATOR_TAGS, OperatorParams, values_on_grid
from .reporting import csv_text, json_text

COMMANDS = ("eval", "moments", "verify", "table", "voronovskaja", "figure", "eval2d", "figure2d")

# acceptance grid for `verify`
VERIFY_N = (1, 2, 5, 10, 50)
VERIFY_K = (0.0, 0.1, 0.5, 1.0, 3.0)
VERIFY_AB = ((0.0, 0.0), (1.0, 2.0), (0.5, 0.5))
VERIFY_X = (0.0, 0.25, 0.5, 0.75, 1.0)
VERIFY_CHECKS = (
    [("lupas", j) for j in range(5)]
    + [("lupas_central", j) for j in (2, 3, 4)]
    + [("kant", j) for j in range(5)]
    + [("kant_central", j) for j in (1, 2)]
)
ORDERS = {"lupas": (0, 1, 2, 3, 4), "lupas_central": (2, 3, 4), "kant": (0, 1, 2, 3, 4), "kant_central": (1, 2)}


class ConfigError(Exception):
    pass


def _floats(text: Optional[str], name: str) -> Optional[list]:
    if text is None:
        return None
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--{name} expects comma-separated numbers, got {text!r}") from None


def _ints(text: Optional[str], name: str) -> Optional[list]:
    vals = _floats(text, name)
    if vals is None:
        return None
    if any(v != int(v) for v in vals):
        raise ConfigError(f"--{name} expects integers, got {text!r}")
    return [int(v) for v in vals]


def _one(values: Optional[list], name: str, default=None):
    if values is None:
        if default is None:
            raise ConfigError(f"--{name} is required")
        return default
    if len(values) != 1:
        raise ConfigError(f"--{name} takes a single value here")
    return values[0]


def _params(args, n: Optional[int] = None) -> OperatorParams:
    n = n if n is not None else _one(_ints(args.n, "n"), "n")
    try:
        return OperatorParams(n, args.k, args.alpha, args.beta)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _bparams(args) -> BivariateParams:
    n1 = _one(_ints(args.n, "n"), "n")
    n2 = args.n2 if args.n2 is not None else n1
    k2 = args.k2 if args.k2 is not None else args.k
    a2 = args.alpha2 if args.alpha2 is not None else args.alpha
    b2 = args.beta2 if args.beta2 is not None else args.beta
    try:
        return BivariateParams(
            OperatorParams(n1, args.k, args.alpha, args.beta),
            OperatorParams(n2, k2, a2, b2),
            strict=args.strict,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _points(args, name: str = "x") -> np.ndarray:
    explicit = _floats(getattr(args, name), name)
    if explicit is not None:
        pts = np.array(explicit)
    elif args.grid is not None:
        if args.grid < 2:
            raise ConfigError("--grid needs at least 2 points")
        pts = uniform_grid(args.grid)
    else:
        raise ConfigError(f"give --{name} or --grid")
    if pts.size and (pts.min() < 0 or pts.max() > 1):
        raise ConfigError(f"--{name} values must lie in [0, 1]")
    return pts


def _quad(args):
    try:
        return gauss_legendre(args.quad_order)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _function(name):
    try:
        return get_function(name)
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None


def _function_2d(name):
    try:
        return get_function_2d(name)
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None


def _table(args, header, rows) -> str:
    rows = list(rows)
    if args.format == "json":
        return json_text([dict(zip(header, r)) for r in rows])
    return csv_text(header, rows)


def cmd_eval(args) -> tuple[int, str]:
    if args.op not in OPERATOR_TAGS:
        raise ConfigError(f"unknown operator {args.op!r}; expected one of {', '.join(OPERATOR_TAGS)}")
    f = _function(args.fn)
    p = _params(args)
    xs = _points(args)
    vals = values_on_grid(f, args.op, p, xs, _quad(args), args.stancu_alpha)
    header = ("operator", "n", "k", "alpha", "beta", "x", "f", "value")
    rows = ((args.op, p.n, p.k, p.alpha, p.beta, x, fx, v) for x, fx, v in zip(xs, f(xs), vals))
    return 0, _table(args, header, rows)


def _oracle_extended(args, max_n: int) -> bool:
    extended = args.oracle == "extended"
    if extended and max_n > EXTENDED_MAX_N:
        raise ConfigError(f"--oracle extended supports n <= {EXTENDED_MAX_N}; lower --max-n or --n")
    return extended


def cmd_moments(args) -> tuple[int, str]:
    if args.kind not in KINDS:
        raise ConfigError(f"unknown --kind {args.kind!r}; expected one of {', '.join(KINDS)}")
    p = _params(args)
    xs = _points(args)
    orders = ORDERS[args.kind] if args.order is None else (args.order,)
    if any(o not in ORDERS[args.kind] for o in orders):
        raise ConfigError(f"--order for kind {args.kind} must be one of {ORDERS[args.kind]}")
    extended = _oracle_extended(args, p.n)
    reports = [moment_report(args.kind, p, float(x), o, extended) for x in xs for o in orders]
    return 0, _table(args, MOMENT_CSV_HEADER, (r.csv_row() for r in reports))


def verify_grid(max_n: Optional[int] = None):
    ns = [n for n in VERIFY_N if max_n is None or n <= max_n]
    return list(itertools.product(ns, VERIFY_K, VERIFY_AB, VERIFY_X))


def cmd_verify(args) -> tuple[int, str]:
    # the grid is fixed, but a contradictory parameter set is still a config error
    _params(args, 1)
    max_n = args.max_n
    if max_n is not None and max_n < 1:
        raise ConfigError("--max-n must be at least 1")
    grid = verify_grid(max_n)
    extended = _oracle_extended(args, max(n for n, *_ in grid))
    reports = []
    for n, k, (a, b), x in grid:
        p = OperatorParams(n, k, a, b)
        for kind, order in VERIFY_CHECKS:
            reports.append(moment_report(kind, p, x, order, extended))
    hard = [r for r in reports if r.flagged and r.order <= 2]
    soft = [r for r in reports if r.flagged and r.order > 2]
    print(
        f"verify: {len(reports)} rows over {len(grid)} parameter tuples; "
        f"{len(hard)} flagged at order <= 2, {len(soft)} flagged at orders 3-4 "
        f"(oracle: {'extended' if extended else 'log'})",
        file=sys.stderr,
    )
    for r in soft:
        print(f"  flagged order {r.order} {r.kind}: {r.csv_row()}", file=sys.stderr)
    return (1 if hard else 0), _table(args, MOMENT_CSV_HEADER, (r.csv_row() for r in reports))


def cmd_table(args) -> tuple[int, str]:
    quad = _quad(args)
    if args.example is not None:
        try:
            reports = example_reports(args.example, args.grid, quad)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    else:
        if args.op not in OPERATOR_TAGS:
            raise ConfigError("give --example or a valid --op with --fn and --n")
        f = _function(args.fn)
        ns = _ints(args.n, "n")
        if not ns:
            raise ConfigError("--n is required")
        sweep = [_params(args, n) for n in ns]
        reports = [convergence_table(f, args.op, sweep, args.grid or 1001, quad, args.stancu_alpha)]
    header = ("function", "operator", "n", "k", "alpha", "beta", "n2", "k2", "alpha2", "beta2", "sup_error", "bound")
    rows = []
    for r in reports:
        if hasattr(r, "csv_rows"):
            for p, e, b in zip(r.sweep, r.sup_error, r.bound):
                rows.append((r.function, r.operator_tag, p.n, p.k, p.alpha, p.beta, "", "", "", "", e, b))
        else:
            px, py = r.params.px, r.params.py
            rows.append((r.function, r.label, px.n, px.k, px.alpha, px.beta,
                         py.n, py.k, py.alpha, py.beta, r.sup_error, r.bound))
    return 0, _table(args, header, rows)


def cmd_voronovskaja(args) -> tuple[int, str]:
    f = _function(args.fn)
    if f.d1 is None or f.d2 is None:
        raise ConfigError(f"function {args.fn!r} has no analytic derivatives")
    start = _one(_ints(args.n, "n"), "n", 100)
    p = _params(args, start)
    xs = _points(args)
    if np.any((xs <= 0) | (xs >= 1)):
        raise ConfigError("Voronovskaja probes need interior points 0 < x < 1")
    seq = doubling_sequence(start, args.steps)
    reports = [voronovskaja_probe(f, p, float(x), seq, _quad(args)) for x in xs]
    if args.format == "json":
        return 0, json_text([asdict(r) for r in reports])
    header = reports[0].CSV_HEADER
    return 0, csv_text(header, itertools.chain.from_iterable(r.csv_rows() for r in reports))


def cmd_figure(args) -> tuple[int, str]:
    if args.figure not in FIGURES:
        raise ConfigError(f"unknown figure id {args.figure!r}; expected 1..9")
    if args.command == "figure2d" and not isinstance(FIGURES[args.figure], Figure2D):
        raise ConfigError("figure2d covers the surface figures 7, 8 and 9")
    header, rows = figure_rows(args.figure, args.grid, _quad(args))
    return 0, _table(args, header, rows)


def cmd_eval2d(args) -> tuple[int, str]:
    f = _function_2d(args.fn)
    bp = _bparams(args)
    quad = _quad(args)
    op = args.op if args.op in ("kantorovich_stancu_k", "d_star") else None
    if op is None:
        raise ConfigError("eval2d supports --op kantorovich_stancu_k or d_star")
    if args.x is not None and args.y is not None:
        xs, ys = _points(args, "x"), _points(args, "y")
        if xs.size != ys.size:
            raise ConfigError("--x and --y must list the same number of points")
        if op == "d_star":
            vals = [eval_d_star_2d(f, bp.px.n, bp.py.n, x, y, quad) for x, y in zip(xs, ys)]
        else:
            vals = [eval_2d(f, bp, x, y, quad) for x, y in zip(xs, ys)]
        pts = list(zip(xs, ys))
    else:
        if args.grid is None:
            raise ConfigError("give --x and --y, or --grid")
        g = _points(args, "x") if args.x is not None else uniform_grid(args.grid)
        if op == "d_star":
            V = eval_d_star_2d_grid(f, bp.px.n, bp.py.n, g, g, quad)
        else:
            V = eval_2d_grid(f, bp, g, g, quad)
        pts = [(x, y) for x in g for y in g]
        vals = V.ravel()
    fv = [float(f(np.array([x]), np.array([y]))[0]) for x, y in pts]
    header = ("x", "y", "f", "K_f")
    return 0, _table(args, header, ((x, y, a, v) for (x, y), a, v in zip(pts, fv, vals)))


HANDLERS = {
    "eval": cmd_eval,
    "moments": cmd_moments,
    "verify": cmd_verify,
    "table": cmd_table,
    "voronovskaja": cmd_voronovskaja,
    "figure": cmd_figure,
    "eval2d": cmd_eval2d,
    "figure2d": cmd_figure,
}


HELP = {
    "eval": "apply a univariate operator at --x points or on a --grid",
    "moments": "closed-form moments against the summation oracle",
    "verify": "run the moment oracle over the full acceptance grid",
    "table": "sup-error and bound table for an --example or a custom sweep",
    "voronovskaja": "scaled errors n(K_n f - f) along a doubling sequence",
    "figure": "CSV data re-plotting figure 1..9",
    "eval2d": "apply the bivariate operator at (--x, --y) pairs or on a --grid",
    "figure2d": "CSV surface data for figures 7..9",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polya-approx",
        description="Lupas-type operators with Pochhammer k-symbol: evaluation, moments and bounds.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--op", default="lupas_k", help=f"operator tag: {', '.join(OPERATOR_TAGS)}")
    common.add_argument("--n", help="degree (comma list for `table`; start of the doubling sequence for `voronovskaja`)")
    common.add_argument("--k", type=float, default=0.0)
    common.add_argument("--alpha", type=float, default=0.0)
    common.add_argument("--beta", type=float, default=0.0)
    common.add_argument("--n2", type=int, help="second-axis degree (defaults to --n)")
    common.add_argument("--k2", type=float)
    common.add_argument("--alpha2", type=float)
    common.add_argument("--beta2", type=float)
    common.add_argument("--strict", action="store_true", help="enforce alpha1 <= alpha2 <= beta1 <= beta2")
    common.add_argument("--stancu-alpha", type=float, help="urn parameter for --op stancu (default k/n)")
    common.add_argument("--fn", default="e1", help="catalog function name")
    common.add_argument("--x", help="comma-separated evaluation points")
    common.add_argument("--y", help="comma-separated second coordinates (eval2d)")
    common.add_argument("--grid", type=int, help="number of uniform grid points per axis")
    common.add_argument("--quad-order", type=int, default=16)
    common.add_argument("--figure", type=int)
    common.add_argument("--example", help="example id, e.g. 2.2 or 3.10")
    common.add_argument("--kind", default="kant", help=f"moment kind: {', '.join(KINDS)}")
    common.add_argument("--order", type=int)
    common.add_argument("--max-n", type=int, help="restrict the verify grid to n <= MAX_N")
    common.add_argument("--oracle", choices=("log", "extended"), default="log")
    common.add_argument("--steps", type=int, default=5, help="length of the doubling sequence")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=HELP[name])
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        status, text = HANDLERS[args.command](args)
    except ConfigError as exc:
        print(f"polya-approx {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
