import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacobi_envelope.jacobi import log_weight, orthonormal_scaled
from jacobi_envelope.oscillatory import (
    check_integral_identity,
    eval_W,
    mu,
    mu_product_closed,
    osc_window,
    pointwise_bound,
    pointwise_bound_check,
    w_envelope_check,
    wronskian_direct,
    wronskian_from_w,
)
from jacobi_envelope.params import DomainError, JacobiParams, delta_interval, derive_params


def params_st(k_max=50, ab_max=50.0):
    return st.builds(
        lambda k, a, b: JacobiParams(k, max(a, b), min(a, b)),
        st.integers(1, k_max),
        st.floats(0.0, ab_max),
        st.floats(0.0, ab_max),
    )


def test_integral_identity_anchor():
    r = check_integral_identity(JacobiParams(1, 0, 0))
    assert r.lhs == pytest.approx(16 / 3, rel=1e-13)
    assert r.rhs == pytest.approx(16 / 3, rel=1e-13)


@pytest.mark.parametrize("p", [JacobiParams(3, 1, 0.5), JacobiParams(10, 5, 2), JacobiParams(50, 50, 0.3)])
def test_integral_identity(p):
    r = check_integral_identity(p)
    assert r.quad.converged and r.rel_err < 1e-9


def test_window_k1_a2_b1():
    win = osc_window(derive_params(JacobiParams(1, 2, 1)))
    assert win.gamma_plus == pytest.approx(0.663836717691, abs=1e-12)


@given(params_st())
def test_window_nested_in_envelope(p):
    dp = derive_params(p)
    win = osc_window(dp)
    iv = delta_interval(dp)
    assert iv.lo <= win.gamma_minus < win.gamma_plus <= iv.hi
    # the window is where mu_-1 mu_1 > 0
    xs = np.linspace(win.gamma_minus, win.gamma_plus, 7)[1:-1]
    assert np.all(mu_product_closed(dp, xs) > 0)


@given(params_st(), st.floats(-0.99, 0.99))
def test_mu_product(p, x):
    dp = derive_params(p)
    prod = mu(dp, x, -1) * mu(dp, x, 1)
    assert prod == pytest.approx(mu_product_closed(dp, x), rel=1e-9, abs=1e-9 * dp.rho**2)


@given(params_st(), st.floats(0.01, 0.99))
def test_wronskian_identity(p, t):
    iv = delta_interval(derive_params(p))
    x = np.asarray(iv.lo + t * iv.width)
    v, l0 = wronskian_direct(p, x)
    m, lw = wronskian_from_w(p, x)
    assert m > 0
    assert float(v * np.exp(l0 - lw)) == pytest.approx(float(m), rel=1e-10)


def test_wronskian_positive_everywhere():
    p = JacobiParams(12, 3, 1)
    m, _ = wronskian_from_w(p, np.linspace(-0.999, 0.999, 501))
    assert np.all(m > 0)


def test_w_values_consistent():
    p = JacobiParams(4, 2, 1)
    w = eval_W(p, 0.1)
    h2 = math.exp(2 * (__import__("jacobi_envelope").log_norm(p).log_hk))
    assert w.raw == pytest.approx(w.weighted_over_norm * h2 / (0.9**3 * 1.1**2), rel=1e-12)
    assert w.weighted == pytest.approx(w.weighted_over_norm * h2, rel=1e-12)


@pytest.mark.parametrize("p", [JacobiParams(1, 0, 0), JacobiParams(6, 1, 1), JacobiParams(40, 100, 50)])
def test_bounds_on_window(p):
    assert pointwise_bound_check(p).ok
    assert w_envelope_check(p).ok


@given(params_st(k_max=30), st.floats(0.01, 0.99))
def test_solution_bound_consequence(p, t):
    # w Pn^2 < (1-x^2) w W / (mu_-1 mu_1 h^2) inside the window
    dp = derive_params(p)
    win = osc_window(dp)
    x = win.gamma_minus + t * (win.gamma_plus - win.gamma_minus)
    y, _ = orthonormal_scaled(p, np.asarray(x), 0.5 * log_weight(x, p.alpha, p.beta))
    w = eval_W(p, x).weighted_over_norm / ((1 - x) * (1 + x))
    assert y * y < (1 - x * x) * w / mu_product_closed(dp, x) * (1 + 1e-12)


def test_pointwise_bound_outside_window_rejected():
    dp = derive_params(JacobiParams(5, 3, 1))
    with pytest.raises(DomainError):
        pointwise_bound(dp, delta_interval(dp).hi)


def test_k0_rejected():
    with pytest.raises(DomainError):
        osc_window(derive_params(JacobiParams(0, 1, 1)))
