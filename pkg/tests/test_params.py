import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacobi_envelope.params import (
    THEOREM2_BETA_MIN,
    DomainError,
    Interval,
    JacobiParams,
    d_of_x,
    delta_interval,
    delta_radical,
    delta_trig,
    derive_params,
)


def ordered_params(k_max=60, ab_max=200.0):
    return st.builds(
        lambda k, a, b: JacobiParams(k, max(a, b), min(a, b)),
        st.integers(0, k_max),
        st.floats(0.0, ab_max),
        st.floats(0.0, ab_max),
    )


@pytest.mark.parametrize("k,a,b", [(-1, 0, 0), (1.5, 0, 0), (True, 0, 0), (1, -1, 0), (1, 0, -2), (1, math.nan, 0)])
def test_rejects_invalid_params(k, a, b):
    with pytest.raises(DomainError):
        JacobiParams(k, a, b)


def test_domain_predicates():
    assert JacobiParams(1, 0, 0).in_theorem1_domain
    assert not JacobiParams(0, 0, 0).in_theorem1_domain
    assert not JacobiParams(3, 1, 2).in_theorem1_domain
    assert JacobiParams(6, 0.61, 0.61).in_theorem2_domain
    assert not JacobiParams(6, 1, 0.6).in_theorem2_domain
    assert not JacobiParams(5, 1, 1).in_theorem2_domain
    assert THEOREM2_BETA_MIN == pytest.approx(0.60355339059327)


def test_derived_values_k1_a2_b1():
    dp = derive_params(JacobiParams(1, 2, 1))
    assert (dp.eta, dp.sigma, dp.r, dp.rho) == (1, 3, 6, 5)
    assert dp.q == pytest.approx(1 / 6)
    assert dp.s == pytest.approx(1 / 2)
    assert math.sin(dp.tau_prime) == pytest.approx(4 / 6)


def test_tau_prime_undefined_at_k0():
    assert derive_params(JacobiParams(0, 2, 1)).tau_prime is None


def test_delta_frozen_value():
    iv = delta_interval(derive_params(JacobiParams(1, 2, 1)))
    # -qs +- sqrt((1-q^2)(1-s^2)) with q = 1/6, s = 1/2
    assert iv.hi == pytest.approx(-1 / 12 + math.sqrt(35 / 36 * 3 / 4), rel=1e-14)
    assert iv.hi == pytest.approx(0.770579230497, abs=1e-12)


def test_delta_legendre_is_whole_interval():
    iv = delta_interval(derive_params(JacobiParams(7, 0, 0)))
    assert iv.as_tuple() == (-1.0, 1.0)


def test_delta_requires_order():
    with pytest.raises(DomainError):
        delta_interval(derive_params(JacobiParams(3, 1, 2)))


@given(ordered_params())
def test_delta_routes_agree_and_bound_zeros_of_d(p):
    dp = derive_params(p)
    rad, trig = delta_radical(dp), delta_trig(dp)
    assert rad == pytest.approx(trig, abs=1e-12)
    iv = delta_interval(dp)
    assert -1.0 <= iv.lo < iv.hi <= 1.0
    assert abs(d_of_x(dp, iv.lo)) < 1e-12
    assert abs(d_of_x(dp, iv.hi)) < 1e-12
    assert d_of_x(dp, iv.mid) > 0


def test_interval_helpers():
    a = Interval(-1, 1, False, True)
    assert not a.contains(-1.0) and a.contains(1.0)
    assert list(a.contains(np.array([-2.0, 0.0, 1.0]))) == [False, True, True]
    assert Interval(-0.5, 0.5).strictly_inside(a)
    assert not Interval(-1, 0.5).strictly_inside(a)
    assert a.width == 2 and a.mid == 0
    with pytest.raises(ValueError):
        Interval(1, 0)
