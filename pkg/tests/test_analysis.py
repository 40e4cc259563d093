import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polya_approx.analysis import (
    SAFETY_FACTOR,
    GridModulus,
    bound_c1,
    bound_modkant,
    bound_surmod,
    convergence_table,
    derivative_spec,
    modulus_estimate,
    modulus_upper,
    sup_error,
    voronovskaja_probe,
)
from polya_approx.functions import CATALOG, FunctionSpec
from polya_approx.moments import moment_oracle
from polya_approx.operators import OperatorParams, evaluate

P = OperatorParams
C = CATALOG


def _brute_modulus(f, delta, points):
    g = np.linspace(0, 1, points)
    v = f(g)
    d = np.abs(g[:, None] - g[None, :]) <= delta + 1e-12
    return float(np.max(np.abs(v[:, None] - v[None, :])[d]))


def test_modulus_examples():
    m = modulus_estimate(C["e1"], 0.2)
    assert m.value == pytest.approx(0.2, abs=1e-12) and m.exact and m.grid_points == 1001
    assert modulus_estimate(C["abs_half"], 0.2).value == pytest.approx(0.2, abs=1e-12)
    e2 = modulus_estimate(C["e2"], 0.1)
    assert e2.value == pytest.approx(0.19, abs=1e-12) and not e2.exact


@pytest.mark.parametrize("name", ["f2", "f4", "abs_half", "e3"])
@pytest.mark.parametrize("delta", [0.013, 0.1, 0.37, 1.0])
def test_modulus_matches_pairwise_brute_force(name, delta):
    assert modulus_estimate(C[name], delta, 201).value == pytest.approx(_brute_modulus(C[name], delta, 201), abs=1e-14)


@given(st.sampled_from(sorted(CATALOG)), st.floats(1e-3, 1), st.floats(1e-3, 1))
def test_modulus_monotone_in_delta(name, d1, d2):
    gm = GridModulus(C[name], 301)
    lo, hi = sorted((d1, d2))
    assert gm(lo) <= gm(hi)


@pytest.mark.parametrize("name", ["e1", "abs_half"])
def test_grid_never_exceeds_exact_modulus(name):
    f = C[name]
    for delta in np.linspace(0.001, 1, 57):
        assert modulus_estimate(f, delta).value <= f.exact_modulus(delta) + 1e-12


def test_modulus_upper_pads_grid_values():
    assert modulus_upper(C["e1"], 0.3) == 0.3
    assert modulus_upper(C["e2"], 0.1) == pytest.approx(SAFETY_FACTOR * 0.19)
    with pytest.raises(ValueError):
        modulus_estimate(C["e2"], 0.0)


def test_bound_surmod_examples():
    assert bound_surmod(C["e1"], 99, 1.0) == pytest.approx(1.5 * math.sqrt(0.02), rel=1e-14)
    assert bound_surmod(C["e1"], 99, 1.0) == pytest.approx(0.2121, abs=1e-4)
    n = 30
    assert bound_surmod(C["abs_half"], n, 1.0) == 1.5 * min(math.sqrt(2 / (n + 1)), 0.5)


@pytest.mark.parametrize("name", sorted(CATALOG))
@pytest.mark.parametrize("n", [10, 50, 100])
def test_surmod_dominates_sup_error(name, n):
    f = C[name]
    for k in (0.1, 1.0):
        # the bound is exactly 0 for constants; allow rounding in the weighted sum
        assert sup_error(f, "lupas_k", P(n, k)) <= bound_surmod(f, n, k) + 1e-12


def test_bound_modkant_identity_case():
    p = P(20, 0.5, 1.0, 2.0)
    for x in (0.0, 0.4, 1.0):
        nu2 = moment_oracle("kantorovich_stancu_k", p, x, 2, central=True)
        assert nu2 > 0
        assert bound_modkant(C["e1"], p, x) == pytest.approx(2 * math.sqrt(nu2), rel=1e-14)


def test_bound_modkant_pointwise_abs_half():
    f = C["abs_half"]
    p = P(50, 0.5)
    for x in np.linspace(0, 1, 201):
        assert abs(evaluate(f, "kantorovich_stancu_k", p, x) - f(x)) <= bound_modkant(f, p, x)


def test_bound_c1_cases():
    p = P(25, 0.7, 0.5, 1.0)
    for x in (0.1, 0.5, 0.93):
        nu1 = moment_oracle("kantorovich_stancu_k", p, x, 1, central=True)
        err = abs(evaluate(C["e1"], "kantorovich_stancu_k", p, x) - x)
        assert bound_c1(C["e1"], p, x) == pytest.approx(abs(nu1), abs=1e-15)
        assert err == pytest.approx(abs(nu1), abs=1e-14)
    const = FunctionSpec("c", lambda t: np.full_like(t, 3.0), d1=lambda t: np.zeros_like(t), d2=lambda t: np.zeros_like(t))
    assert bound_c1(const, p, 0.4) == 0
    q = P(30, 0.2)
    assert bound_c1(C["e2"], q, 0.5) >= abs(evaluate(C["e2"], "kantorovich_stancu_k", q, 0.5) - 0.25)


@pytest.mark.parametrize("name", ["e2", "e3", "f2", "f4", "f5"])
def test_bound_c1_dominates_pointwise_error(name):
    f = C[name]
    for p in (P(10, 0.3), P(40, 1.0, 1.0, 1.0)):
        for x in np.linspace(0, 1, 41):
            assert abs(evaluate(f, "kantorovich_stancu_k", p, x) - f(x)) <= bound_c1(f, p, x)


def test_derivative_spec_requires_derivative():
    with pytest.raises(ValueError):
        derivative_spec(C["abs_half"])
    assert derivative_spec(C["e1"]).exact_modulus(0.3) == 0.0


def test_voronovskaja_probe_e2():
    r = voronovskaja_probe(C["e2"], P(100, 1.0), 0.5)
    assert r.limit == pytest.approx(0.5)
    assert r.n_sequence == (100, 200, 400, 800, 1600)
    assert r.gaps_decreasing() and r.final_gap_ok()
    assert len(r.scaled_error) == len(r.gaps) == 5


def test_voronovskaja_probe_identity_and_constant():
    p = P(100, 0.4, 0.5, 1.5)
    x = 0.3
    r = voronovskaja_probe(C["e1"], p, x)
    assert r.limit == pytest.approx(p.alpha + 0.5 - (p.beta + 1) * x, abs=1e-15)
    for n, s in zip(r.n_sequence, r.scaled_error):
        assert s == pytest.approx(n * moment_oracle("kantorovich_stancu_k", p.with_n(n), x, 1, central=True), abs=1e-10)
    r0 = voronovskaja_probe(C["e0"], p, x)
    assert r0.limit == 0 and max(abs(s) for s in r0.scaled_error) < 1e-9


def test_voronovskaja_probe_preconditions():
    with pytest.raises(ValueError):
        voronovskaja_probe(C["e2"], P(10), 0.0)
    with pytest.raises(ValueError):
        voronovskaja_probe(C["abs_half"], P(10), 0.5)


def test_voronovskaja_serialization():
    r = voronovskaja_probe(C["e2"], P(10, 1.0), 0.25, (10, 20))
    lines = r.to_csv().splitlines()
    assert lines[0] == "n,k,alpha,beta,x,scaled_error,limit,gap" and len(lines) == 3
    doc = json.loads(r.to_json())
    assert doc["n_sequence"] == [10, 20] and doc["params"]["k"] == 1.0


def test_convergence_example_claims():
    f1 = convergence_table(C["f1"], "lupas_k", [P(10, 0.1)])
    f1_lupas = convergence_table(C["f1"], "lupas", [P(10)])
    assert f1.sup_error[0] <= f1_lupas.sup_error[0]
    r = convergence_table(C["f2"], "lupas_k", [P(n, 0.5) for n in (10, 50, 100)])
    assert r.sup_error[0] > r.sup_error[1] > r.sup_error[2]
    r6 = convergence_table(C["f6"], "kantorovich_stancu_k", [P(20, k, 1.0, 1.0) for k in (0.3, 0.6, 0.9, 1.2, 1.5)])
    assert all(b >= a for a, b in zip(r6.sup_error, r6.sup_error[1:]))
    for report in (r, r6):
        assert all(e <= b for e, b in zip(report.sup_error, report.bound))


def test_convergence_report_serialization():
    r = convergence_table(C["abs_half"], "d_star", [P(10), P(20)], grid_points=101)
    assert r.bound_exact
    lines = r.to_csv().splitlines()
    assert lines[0].startswith("function,operator,n") and len(lines) == 3
    assert json.loads(r.to_json())["operator_tag"] == "d_star"
    with pytest.raises(ValueError):
        convergence_table(C["e1"], "lupas", [])
