import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special

from betajacobi.constants import (
    JacobiParams,
    LogValue,
    case1_constants,
    case2_constants,
    gamma_product,
    log_gamma,
    norm_max,
    norm_min,
    selberg_c,
)
from betajacobi.errors import DomainError

betas = st.floats(0.3, 6)
ab = st.floats(-0.9, 10)


@given(st.floats(-50, 50).filter(lambda x: abs(x) > 1e-3))
def test_logvalue_roundtrip(x):
    assert float(LogValue.from_float(x)) == pytest.approx(x, rel=1e-15)


@given(st.floats(-20, 20), st.floats(-20, 20))
def test_logvalue_algebra(x, y):
    if abs(x) < 1e-3 or abs(y) < 1e-3:
        return
    X, Y = LogValue.from_float(x), LogValue.from_float(y)
    assert float(X * Y) == pytest.approx(x * y, rel=1e-14)
    assert float(X / Y) == pytest.approx(x / y, rel=1e-14)


def test_negative_gamma_signs():
    assert float(log_gamma(-0.5)) == pytest.approx(-2 * math.sqrt(math.pi), rel=1e-14)
    assert log_gamma(-1.5).sign == 1
    beta = 0.7
    v = float(gamma_product([], [-beta / 2, 1 + beta / 2])) * math.pi
    assert v == pytest.approx(-math.sin(beta * math.pi / 2), rel=1e-13)


@given(betas, ab, ab)
def test_selberg_one_variable_is_beta(beta, a, b):
    ref = special.betaln(beta * (a + 1) / 2, beta * (b + 1) / 2)
    assert selberg_c(beta, a, b, 1).log_abs == pytest.approx(ref, rel=1e-12, abs=1e-12)
    assert float(norm_min(JacobiParams(beta, a, b, 1))) == pytest.approx(math.exp(-ref), rel=1e-12)


@given(betas, ab, ab, st.integers(1, 8))
def test_selberg_symmetry(beta, a, b, m):
    assert selberg_c(beta, a, b, m).isclose(selberg_c(beta, b, a, m), 1e-12)
    p = JacobiParams(beta, a, b, m)
    assert norm_max(p).isclose(norm_min(p.swapped()), 1e-14)


@pytest.mark.parametrize("beta,a,b", [(2.0, 0.0, 0.0), (1.0, 0.5, 1.5), (3.0, 1.0, 0.2)])
def test_selberg_two_variable_quadrature(beta, a, b):
    p, q = beta * (a + 1) / 2 - 1, beta * (b + 1) / 2 - 1

    def f(y, x):
        return x**p * (1 - x) ** q * y**p * (1 - y) ** q * abs(x - y) ** beta

    # symmetric in (x, y): integrate the triangle y < x, where |x - y| is smooth
    val, _ = integrate.dblquad(f, 0, 1, 0, lambda x: x, epsabs=1e-13, epsrel=1e-11)
    val *= 2
    assert float(selberg_c(beta, a, b, 2)) == pytest.approx(val, rel=1e-6)


def test_norm_min_normalizes_figure_parameters():
    # the exact-law integral is checked in the density tests; here the
    # constant itself against an independent mpmath Gamma evaluation
    import mpmath as mp

    beta, a, b, m = 1.75, 2.3, 2.5, 4
    h = mp.mpf(beta) / 2

    def c(a, b, m):
        out = mp.mpf(1)
        for j in range(1, m + 1):
            out *= mp.gamma(h * (a + j)) * mp.gamma(h * (b + j)) * mp.gamma(1 + h * j)
            out /= mp.gamma(1 + h) * mp.gamma(h * (a + b + m + j))
        return out

    ref = m * c(b, 1 + 2 / mp.mpf(beta), m - 1) / c(a, b, m)
    assert float(norm_min(JacobiParams(beta, a, b, m))) == pytest.approx(float(ref), rel=1e-12)


@given(st.floats(0.05, 1.95), st.floats(-0.9, 20), st.integers(1, 10))
def test_case1_recomposition(beta, b, m):
    c = case1_constants(beta, b, m)
    assert (c.C * c.F).isclose(c.C_tilde, 1e-12)
    assert c.C_tilde.sign * c.C.sign * c.F.sign == 1


def test_case1_reflection_sign():
    c = case1_constants(1.0, 2.0, 3)
    # B carries Gamma(-1 - 1/2) = 4 sqrt(pi)/3 > 0 and F carries Gamma(-1/2) < 0
    assert c.F.sign == -1
    assert c.B.sign == 1
    with pytest.raises(DomainError, match="case 1 requires beta in"):
        case1_constants(2.0, 1.0, 2)


@given(st.floats(0.3, 6), st.floats(-0.9, 20), st.integers(1, 10))
def test_case2_k1(beta, b, m):
    c = case2_constants(beta, 1, b, m)
    assert float(c.A) == pytest.approx(1.0, rel=1e-12)
    if beta == 2.0:
        assert float(c.W) == pytest.approx(m * (b + m), rel=1e-12)


@given(st.floats(0.3, 6), st.integers(1, 4), st.floats(-0.9, 10), st.integers(1, 8))
def test_case2_weight_against_selberg_form(beta, k, b, m):
    c = case2_constants(beta, k, b, m)
    a = 2 * k / beta - 1
    uncancelled = (
        LogValue.from_float(m)
        * selberg_c(beta, b, 1 + 2 / beta, m - 1)
        / (selberg_c(beta, a, b, m) * c.A)
    )
    assert c.W.isclose(uncancelled, 1e-10)


def test_constants_finite_across_sweep():
    rng = np.random.default_rng(3)
    for _ in range(500):
        beta = rng.uniform(0.3, 6)
        a, b = rng.uniform(-0.9, 10, 2)
        m = int(rng.integers(1, 9))
        v = norm_min(JacobiParams(beta, a, b, m))
        assert v.sign == 1 and math.isfinite(v.log_abs)


def test_large_sizes_stay_finite_in_log_space():
    v = norm_min(JacobiParams(2.0, 0.5, 200.0, 50))
    assert math.isfinite(v.log_abs)
    assert math.isfinite(selberg_c(2.0, 0.5, 200.0, 50).log_abs)
