import math
import os

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polya_approx.core import gauss_legendre, uniform_grid
from polya_approx.functions import CATALOG, FunctionSpec, get_function, monomial
from polya_approx.operators import (
    OPERATOR_TAGS,
    OperatorParams,
    eval_bernstein,
    eval_bernstein_kantorovich,
    eval_d_star,
    eval_kantorovich_stancu_k,
    eval_lupas,
    eval_lupas_k,
    eval_on_grid,
    eval_stancu,
    evaluate,
    max_workers,
    values_on_grid,
)

e0, e1, e2 = monomial(0), monomial(1), monomial(2)
GRID = uniform_grid(1001)


def test_params_invariant():
    with pytest.raises(ValueError, match="alpha <= beta"):
        OperatorParams(5, 1.0, 2.0, 1.0)
    for bad in [dict(n=0), dict(n=3, k=-1), dict(n=3, alpha=-0.5, beta=1), dict(n=2.5)]:
        with pytest.raises(ValueError):
            OperatorParams(**bad)
    assert OperatorParams(10, 0.2, 1, 2).denominator == 13


def test_lupas_k_reproduces_constants_and_identity():
    for n, k, x in [(1, 0.3, 0.2), (10, 3.0, 0.7), (77, 0.5, 0.01)]:
        assert eval_lupas_k(e0, n, k, x) == pytest.approx(1, abs=1e-13)
        assert eval_lupas_k(e1, n, k, x) == pytest.approx(x, abs=1e-13)


def test_lupas_k_second_moment_example():
    # brute-force weighted sum against the quadratic closed form
    assert eval_lupas_k(e2, 10, 0.1, 0.5) == pytest.approx(0.25 + 1.1 * 0.25 / 10.1, abs=1e-14)


def test_stancu_reductions():
    f = CATALOG["f3"]
    for x in np.linspace(0, 1, 41):
        assert eval_stancu(f, 12, 0.0, x) == pytest.approx(eval_bernstein(f, 12, x), abs=1e-12)
        assert eval_stancu(f, 12, 1 / 12, x) == pytest.approx(eval_lupas(f, 12, x), abs=1e-10)
        assert eval_stancu(f, 12, 0.7 / 12, x) == pytest.approx(eval_lupas_k(f, 12, 0.7, x), abs=1e-10)


def test_kantorovich_examples():
    p = OperatorParams(10, 0.4, 1.0, 2.0)
    assert eval_kantorovich_stancu_k(e0, p, 0.3) == pytest.approx(1, abs=1e-13)
    assert eval_kantorovich_stancu_k(e1, p, 0.5) == pytest.approx(0.5, abs=1e-14)
    # n=1, x=0: the whole weight sits on [0, 1/2], mean of t there is 1/4
    assert eval_bernstein_kantorovich(e1, 1, 0.0) == pytest.approx(0.25, abs=1e-15)
    assert eval_bernstein_kantorovich(e0, 9, 0.4) == pytest.approx(1, abs=1e-13)


def test_bernstein_kantorovich_is_k_zero_case():
    for name in ("f2", "f5", "abs_half"):
        f = CATALOG[name]
        a = values_on_grid(f, "bernstein_kantorovich", OperatorParams(15), GRID)
        b = values_on_grid(f, "kantorovich_stancu_k", OperatorParams(15, 0.0), GRID)
        assert np.max(np.abs(a - b)) <= 1e-14


def test_d_star_is_k_one_case():
    f = CATALOG["f4"]
    for x in (0.0, 0.2, 0.5, 1.0):
        assert eval_d_star(f, 20, x) == pytest.approx(eval_kantorovich_stancu_k(f, OperatorParams(20, 1.0), x), abs=1e-12)


def test_evaluate_dispatch_and_unknown_tag():
    p = OperatorParams(8, 0.5, 0.5, 1.0)
    for tag in OPERATOR_TAGS:
        assert evaluate(e0, tag, p, 0.3) == pytest.approx(1, abs=1e-13)
    with pytest.raises(ValueError, match="unknown operator"):
        evaluate(e0, "nope", p, 0.3)
    with pytest.raises(ValueError):
        evaluate(e0, "lupas", p, 1.2)


def test_endpoint_interpolation_is_exact():
    for name, f in CATALOG.items():
        for tag, p in [("lupas_k", OperatorParams(9, 0.7)), ("lupas", OperatorParams(9)), ("bernstein", OperatorParams(9))]:
            assert evaluate(f, tag, p, 0.0) == float(f(0.0))
            assert evaluate(f, tag, p, 1.0) == float(f(1.0))


def test_eval_on_grid_shapes_and_order():
    assert eval_on_grid(e1, "lupas_k", OperatorParams(10, 0.5), []) == []
    single = eval_on_grid(e1, "lupas_k", OperatorParams(10, 0.5), [0.5])
    assert len(single) == 1 and single[0].x == 0.5 and single[0].operator_tag == "lupas_k"
    res = eval_on_grid(e1, "lupas_k", OperatorParams(10, 0.5), GRID)
    assert [r.x for r in res] == list(GRID)
    assert max(abs(r.value - r.x) for r in res) <= 1e-12


def test_grid_results_independent_of_thread_count(monkeypatch):
    f = CATALOG["f2"]
    p = OperatorParams(40, 0.3, 0.5, 1.0)
    out = []
    for threads in ("1", "3", "0"):
        monkeypatch.setenv("POLYA_APPROX_THREADS", threads)
        out.append(values_on_grid(f, "kantorovich_stancu_k", p, GRID))
    assert all(np.array_equal(out[0], o) for o in out[1:])


def test_thread_env_validation(monkeypatch):
    monkeypatch.setenv("POLYA_APPROX_THREADS", "2")
    assert max_workers() == 2
    monkeypatch.setenv("POLYA_APPROX_THREADS", "0")
    assert max_workers() == (os.cpu_count() or 1)
    monkeypatch.setenv("POLYA_APPROX_THREADS", "-1")
    with pytest.raises(ValueError):
        max_workers()


nonneg_catalog = st.sampled_from(["e0", "e2", "e4", "abs_half"])


@given(nonneg_catalog, st.sampled_from(OPERATOR_TAGS), st.integers(1, 60), st.floats(0, 3), st.floats(0, 1))
def test_positivity(name, tag, n, k, x):
    f = get_function(name)
    assert evaluate(f, tag, OperatorParams(n, k, 0.5, 1.0), x) >= 0


@given(
    st.sampled_from(list(CATALOG)), st.sampled_from(list(CATALOG)),
    st.floats(-2, 2), st.floats(-2, 2),
    st.sampled_from(OPERATOR_TAGS), st.integers(1, 40), st.floats(0, 3), st.floats(0, 1),
)
def test_linearity(fa, fb, a, b, tag, n, k, x):
    f, g = get_function(fa), get_function(fb)
    h = f.combine(g, a, b)
    p = OperatorParams(n, k, 0.0, 0.5)
    lhs = evaluate(h, tag, p, x)
    rhs = a * evaluate(f, tag, p, x) + b * evaluate(g, tag, p, x)
    assert lhs == pytest.approx(rhs, abs=1e-11)


# e0 and e1 are reproduced exactly for every n
@pytest.mark.parametrize("name", sorted(set(CATALOG) - {"e0", "e1"}))
def test_uniform_convergence_improves(name):
    f = CATALOG[name]
    err = []
    for n in (10, 100):
        v = values_on_grid(f, "lupas_k", OperatorParams(n, 0.5), GRID)
        err.append(np.max(np.abs(v - f(GRID))))
    assert err[1] < err[0]


def test_quadrature_order_is_respected():
    f = CATALOG["f2"]
    p = OperatorParams(5, 0.5)
    coarse = evaluate(f, "kantorovich_stancu_k", p, 0.4, gauss_legendre(1))
    fine = evaluate(f, "kantorovich_stancu_k", p, 0.4, gauss_legendre(32))
    assert abs(coarse - fine) > 1e-6
    assert evaluate(f, "kantorovich_stancu_k", p, 0.4) == pytest.approx(fine, abs=1e-13)


def test_custom_function_spec():
    f = FunctionSpec("cos", np.cos)
    assert evaluate(f, "lupas_k", OperatorParams(1, 0.5), 0.25) == pytest.approx(0.75 + 0.25 * math.cos(1.0))
