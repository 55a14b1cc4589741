import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacobi_envelope.jacobi import eval_Z
from jacobi_envelope.params import DomainError, JacobiParams, delta_interval, derive_params
from jacobi_envelope.sonin import (
    coef_A,
    coef_B,
    coef_D,
    d_at_delta_closed_form,
    find_x0,
    lemma_bracket,
    sonin_coeffs,
    sonin_S,
    z_and_derivative,
)

# D from its definition 2(1-x^2)^2 d^3 (4AB - B'), B' by mpmath numerical
# differentiation at 40 digits; identical for r = 50 and r = 7.
D_ORACLE = [
    (1 / 6, 1 / 2, 0.1, -0.66015415320644717543),
    (0.3, 0.7, -0.2, -0.2608456703999999655),
    (0.05, 0.9, 0.0, -0.072558281249999991775),
]


class _QS:
    def __init__(self, q, s):
        self.q, self.s = q, s


@pytest.mark.parametrize("q,s,x,expected", D_ORACLE)
def test_d_polynomial_against_definition(q, s, x, expected):
    assert coef_D(_QS(q, s), x) == pytest.approx(expected, rel=1e-13)


def test_d_at_delta_closed_form_value():
    dp = derive_params(JacobiParams(1, 2, 1))  # q = 1/6, s = 1/2
    iv = delta_interval(dp)
    assert d_at_delta_closed_form(dp, 1) == pytest.approx(coef_D(dp, iv.hi), rel=1e-12)
    assert d_at_delta_closed_form(dp, -1) == pytest.approx(coef_D(dp, iv.lo), rel=1e-12)
    # limit of the defining expression at delta_1, mpmath at 40 digits
    assert coef_D(dp, iv.hi) == pytest.approx(-1.5410888018462308386, rel=1e-13)
    assert coef_D(dp, iv.lo) > 0


def test_d_at_minus_qs_factorization():
    dp = derive_params(JacobiParams(4, 3.0, 1.5))
    q, s = dp.q, dp.s
    expected = -q * s * (1 - q * q) ** 2 * (1 - s * s) ** 2 * (5 + q * q + s * s - 7 * q * q * s * s)
    assert coef_D(dp, -q * s) == pytest.approx(expected, rel=1e-12)


def test_zero_at_minus_qs_when_q_is_zero():
    dp = derive_params(JacobiParams(5, 2, 2))
    r = find_x0(dp)
    assert r.path == "exact" and r.x0 == 0.0 and r.theta == 0.0


def _interior(dp, t):
    iv = delta_interval(dp)
    return iv.lo + t * iv.width


@given(st.integers(1, 50), st.floats(0, 60), st.floats(0, 60), st.floats(0.02, 0.98))
def test_b_positive_and_d_sign_change(k, a, b, t):
    p = JacobiParams(k, max(a, b), min(a, b))
    dp = derive_params(p)
    x = _interior(dp, t)
    if abs(x) >= 1:
        return
    assert coef_B(dp, x) > 0
    c = sonin_coeffs(dp, x)
    assert c.A == pytest.approx(float(coef_A(dp, x)))


@given(st.integers(1, 50), st.floats(0.01, 60), st.floats(0.01, 60))
def test_x0_in_bracket(k, a, b):
    if a == b:
        return
    p = JacobiParams(k, max(a, b), min(a, b))
    dp = derive_params(p)
    r = find_x0(dp)
    br = lemma_bracket(dp)
    assert r.path == "bracket"
    assert br.lo <= r.x0 <= br.hi
    assert 0 < r.theta < 2 / 3
    assert coef_D(dp, r.x0 - 1e-9) > 0 > coef_D(dp, r.x0 + 1e-9)


def test_z_ode():
    # Z'' - 2A Z' + B Z = 0, Z'' by central difference of Z'
    p = JacobiParams(6, 2.5, 0.5)
    dp = derive_params(p)
    xs = np.linspace(-0.5, 0.4, 9)
    z, zp = z_and_derivative(p, xs)
    h = 1e-5
    zpp = (z_and_derivative(p, xs + h)[1] - z_and_derivative(p, xs - h)[1]) / (2 * h)
    res = zpp - 2 * coef_A(dp, xs) * zp + coef_B(dp, xs) * z
    scale = np.abs(coef_B(dp, xs) * z) + np.abs(zpp)
    assert np.all(np.abs(res) < 1e-6 * scale)


def test_z_derivative_matches_difference():
    p = JacobiParams(9, 4, 1)
    xs = np.linspace(-0.6, 0.5, 7)
    _, zp = z_and_derivative(p, xs)
    h = 1e-6
    fd = (eval_Z(p, xs + h) - eval_Z(p, xs - h)) / (2 * h)
    assert np.allclose(zp, fd, atol=1e-6)


def test_s_touches_z_squared_at_critical_points():
    p = JacobiParams(8, 3, 1)
    dp = derive_params(p)
    iv = delta_interval(dp)
    xs = np.linspace(iv.lo + 1e-3, iv.hi - 1e-3, 4001)
    _, zp = z_and_derivative(p, xs)
    i = np.nonzero(np.sign(zp[:-1]) != np.sign(zp[1:]))[0][len(xs) // 8000]
    # refine the zero of Z' by bisection
    lo, hi = xs[i], xs[i + 1]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if np.sign(z_and_derivative(p, mid)[1]) == np.sign(z_and_derivative(p, lo)[1]):
            lo = mid
        else:
            hi = mid
    assert sonin_S(p, lo) == pytest.approx(float(eval_Z(p, lo)) ** 2, rel=1e-10)


def test_interior_required():
    p = JacobiParams(3, 2, 1)
    iv = delta_interval(derive_params(p))
    with pytest.raises(DomainError):
        sonin_S(p, iv.hi)


def test_find_x0_domain():
    with pytest.raises(DomainError):
        find_x0(derive_params(JacobiParams(0, 2, 1)))


def test_theta_definition():
    dp = derive_params(JacobiParams(7, 3.3, 0.7))
    r = find_x0(dp)
    assert r.theta == pytest.approx((-dp.q * dp.s - r.x0) / dp.cos_prod)
    assert math.isclose(r.bracket.hi, -dp.q * dp.s)
