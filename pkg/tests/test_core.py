import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special, stats

from polya_approx.core import (
    SignedLog,
    compensated_sum,
    gauss_legendre,
    pochhammer_k,
    pochhammer_k_signed_log,
    polya_weight_row,
    polya_weight_row_extended,
    uniform_grid,
)

K_VALUES = (0.0, 0.1, 0.5, 1.0, 3.0)


def test_pochhammer_examples():
    assert pochhammer_k(2, 3, 1) == 24
    assert pochhammer_k(1.5, 2, 0.5) == 3.0
    assert pochhammer_k(7.3, 0, 2) == 1
    assert pochhammer_k(0, 0, 1) == 1


def test_pochhammer_rejects_negative_arguments():
    with pytest.raises(ValueError):
        pochhammer_k(1.0, -1, 1.0)
    with pytest.raises(ValueError):
        pochhammer_k(1.0, 2, -0.5)


@pytest.mark.parametrize("lam", [0.5, 1, 2.5])
def test_k_one_is_classical_rising_factorial(lam):
    for m in range(21):
        with mpmath.workdps(60):
            exact = mpmath.rf(mpmath.mpf(lam), m)
            direct = mpmath.fprod(mpmath.mpf(lam) + i for i in range(m))
        assert exact == direct
        assert pochhammer_k(lam, m, 1) == pytest.approx(float(exact), rel=1e-14)


@given(st.floats(0.01, 20), st.integers(0, 30))
def test_k_zero_gives_powers(lam, m):
    assert pochhammer_k(lam, m, 0) == pytest.approx(lam**m, rel=1e-13)


@given(st.floats(0.01, 10), st.integers(0, 25), st.floats(0.05, 4))
def test_scaling_identity(lam, m, k):
    # (lam)_{m,k} = k^m (lam/k)_{m,1}
    assert pochhammer_k(lam, m, k) == pytest.approx(k**m * pochhammer_k(lam / k, m, 1), rel=1e-12)


def test_signed_log_examples():
    assert pochhammer_k_signed_log(0, 3, 1).sign == 0
    s = pochhammer_k_signed_log(2, 3, 1)
    assert s.sign == 1 and s.log_magnitude == pytest.approx(math.log(24), rel=1e-15)
    assert pochhammer_k_signed_log(0, 0, 1) == SignedLog(1, 0.0)


def test_signed_log_large_arguments_do_not_overflow():
    s = pochhammer_k_signed_log(100, 100, 1)
    assert math.isfinite(s.log_magnitude)
    # log-gamma identity (lam)_{m,1} = Gamma(lam+m)/Gamma(lam)
    assert s.log_magnitude == pytest.approx(special.gammaln(200) - special.gammaln(100), rel=1e-14)
    for lam, m in [(50.0, 120), (3.5, 160)]:
        with mpmath.workdps(40):
            exact = mpmath.log(mpmath.fprod(mpmath.mpf(lam) + i for i in range(m)))
        assert pochhammer_k_signed_log(lam, m, 1).log_magnitude == pytest.approx(float(exact), rel=1e-14)


@given(st.floats(-1e300, 1e300).filter(lambda v: v != 0))
def test_signed_log_round_trip(value):
    s = SignedLog.from_float(value)
    back = SignedLog.from_float(s.to_float())
    assert back.sign == s.sign
    assert back.log_magnitude == pytest.approx(s.log_magnitude, abs=1e-15, rel=1e-15)


def test_signed_log_zero_and_arithmetic():
    z = SignedLog.from_float(0.0)
    assert z.is_zero and z.to_float() == 0.0
    a, b = SignedLog.from_float(-3.0), SignedLog.from_float(2.0)
    assert (a * b).to_float() == pytest.approx(-6.0)
    assert (a / b).to_float() == pytest.approx(-1.5)
    assert (z * a).is_zero
    with pytest.raises(ZeroDivisionError):
        a / z
    with pytest.raises(ValueError):
        SignedLog(2, 0.0)


@pytest.mark.parametrize("k", K_VALUES)
def test_n_one_row(k):
    for x in (0.0, 0.3, 1.0):
        assert np.allclose(polya_weight_row(1, k, x).weights, [1 - x, x], atol=1e-15)


def test_k_zero_is_binomial():
    row = polya_weight_row(10, 0.0, 0.5).weights
    expected = np.array([math.comb(10, m) for m in range(11)]) / 2**10
    assert np.allclose(row, expected, rtol=1e-13, atol=0)
    for x in (0.13, 0.77):
        assert np.allclose(polya_weight_row(37, 0.0, x).weights, stats.binom.pmf(range(38), 37, x), rtol=1e-11, atol=1e-300)


def _urn_weights_extended(n, a, x):
    """Product form of the Polya urn with parameter a, in mpmath."""
    with mpmath.workdps(50):
        a, x = mpmath.mpf(a), mpmath.mpf(x)
        den = mpmath.fprod(1 + i * a for i in range(n))
        return [
            mpmath.binomial(n, m)
            * mpmath.fprod(x + i * a for i in range(m))
            * mpmath.fprod(1 - x + i * a for i in range(n - m))
            / den
            for m in range(n + 1)
        ]


def test_row_matches_urn_product_form():
    row = polya_weight_row(10, 0.1, 0.3)
    assert abs(row.total() - 1) <= 1e-12 and np.all(row.weights >= 0)
    urn = _urn_weights_extended(10, 0.1 / 10, 0.3)
    assert np.allclose(row.weights, [float(v) for v in urn], rtol=1e-13, atol=0)


def test_endpoint_rows():
    for k in K_VALUES:
        w0 = polya_weight_row(7, k, 0.0).weights
        w1 = polya_weight_row(7, k, 1.0).weights
        assert w0[0] == 1 and not w0[1:].any()
        assert w1[-1] == 1 and not w1[:-1].any()


def test_row_is_read_only():
    row = polya_weight_row(5, 0.5, 0.4)
    with pytest.raises(ValueError):
        row.weights[0] = 2.0


@pytest.mark.parametrize("n,k,x", [(60, 0.5, 0.37), (45, 3.0, 0.9), (30, 0.0, 0.01), (17, 1.0, 0.5)])
def test_log_domain_row_matches_extended_path(n, k, x):
    fast = polya_weight_row(n, k, x).weights
    slow = np.array([float(v) for v in polya_weight_row_extended(n, k, x)])
    mask = slow > 1e-280
    assert np.allclose(fast[mask], slow[mask], rtol=1e-12, atol=0)


def test_extended_path_limit():
    with pytest.raises(ValueError):
        polya_weight_row_extended(61, 1.0, 0.5)


@given(st.integers(1, 200), st.sampled_from(K_VALUES), st.floats(0, 1))
def test_partition_of_unity_property(n, k, x):
    row = polya_weight_row(n, k, x)
    assert np.all(row.weights >= 0)
    assert abs(row.total() - 1) <= 1e-12


def test_large_n_stays_finite():
    row = polya_weight_row(5000, 1.0, 0.42)
    assert np.all(np.isfinite(row.weights)) and abs(row.total() - 1) <= 1e-11


@pytest.mark.parametrize("bad", [(0, 1, 0.5), (3, -1, 0.5), (3, 1, 1.5), (2.5, 1, 0.5)])
def test_row_rejects_bad_arguments(bad):
    with pytest.raises(ValueError):
        polya_weight_row(*bad)


def test_gauss_legendre_low_orders():
    r1 = gauss_legendre(1)
    assert np.allclose(r1.nodes, [0]) and np.allclose(r1.weights, [2])
    r2 = gauss_legendre(2)
    assert np.allclose(sorted(r2.nodes), [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    assert np.allclose(r2.weights, [1, 1], atol=1e-15)


@pytest.mark.parametrize("order", [1, 2, 5, 16, 33, 64])
def test_gauss_legendre_invariants(order):
    rule = gauss_legendre(order)
    assert abs(compensated_sum(rule.weights) - 2) <= 1e-14
    assert np.all(rule.weights > 0) and np.all(np.abs(rule.nodes) < 1)
    for d in range(2 * order):
        exact = 0.0 if d % 2 else 2.0 / (d + 1)
        assert abs(compensated_sum(rule.weights * rule.nodes**d) - exact) <= 1e-13


def test_order_sixteen_kills_odd_degree_31():
    rule = gauss_legendre(16)
    assert abs(rule.integrate(lambda t: t**31, -1, 1)) <= 1e-13


@pytest.mark.parametrize("order", [0, 65, 2.5])
def test_gauss_legendre_range(order):
    with pytest.raises(ValueError):
        gauss_legendre(order)


def test_compensated_sum_is_order_independent():
    rng = np.random.default_rng(7)
    v = rng.normal(size=10_000) * 10.0 ** rng.integers(-8, 8, size=10_000)
    assert compensated_sum(v) == compensated_sum(v[::-1]) == compensated_sum(rng.permutation(v))


def test_uniform_grid():
    g = uniform_grid(1001)
    assert g[0] == 0 and g[-1] == 1 and len(g) == 1001
    with pytest.raises(ValueError):
        uniform_grid(1)
