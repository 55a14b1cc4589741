import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacobi_envelope.extrema import (
    envelope_grid_size,
    find_local_extrema,
    find_local_maxima,
    global_max,
    golden_max,
    localization_windows,
)
from jacobi_envelope.jacobi import eval_M, eval_Z
from jacobi_envelope.params import THEOREM2_BETA_MIN, DomainError, Interval, JacobiParams, delta_interval, derive_params


def test_m_k1_legendre_maxima():
    p = JacobiParams(1, 0, 0)
    ex = find_local_maxima(lambda x: eval_M(p, x), Interval(-1, 1), 4000)
    assert len(ex) == 2
    for e, sign in zip(ex.points, (-1, 1)):
        # golden section on a flat peak resolves x only to about sqrt(eps)
        assert e.x == pytest.approx(sign * math.sqrt(2 / 3), abs=1e-7)
        assert e.value == pytest.approx(1 / math.sqrt(3), rel=1e-14)


def test_z_squared_k1_same_abscissas():
    p = JacobiParams(1, 0, 0)
    g = global_max(lambda x: eval_Z(p, x) ** 2, Interval(-1, 1), 4000)
    assert abs(g.x_star) == pytest.approx(math.sqrt(2 / 3), abs=1e-7)
    assert g.value == pytest.approx(1 / math.sqrt(3), rel=1e-14)


def test_constant_has_no_maxima():
    assert len(find_local_maxima(lambda x: np.ones_like(x), Interval(0, 1), 100)) == 0


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        find_local_maxima(np.sin, Interval(0.5, 0.5), 100)


def test_closed_endpoint_can_win():
    g = global_max(lambda x: x, Interval(0, 1), 101)
    assert g.x_star == 1.0 and g.value == 1.0
    g = global_max(lambda x: x * (1.5 - x), Interval(0, 1, True, False), 101)
    assert g.x_star == pytest.approx(0.75, abs=1e-7)


def test_z_endpoints_never_win():
    for p in (JacobiParams(1, 2, 1), JacobiParams(12, 5, 0)):
        iv = delta_interval(derive_params(p))
        g = global_max(lambda x: eval_Z(p, x) ** 2, iv, 2000)
        assert eval_Z(p, iv.lo) == 0.0 and eval_Z(p, iv.hi) == 0.0
        assert iv.lo < g.x_star < iv.hi


def test_golden_vectorized():
    x, v = golden_max(lambda t: -(t - 0.3) ** 2 * np.array([1.0, 2.0]), np.array([0.0, -1.0]), np.array([1.0, 1.0]))
    assert np.allclose(x, 0.3, atol=1e-7)


def test_m_maximizer_in_nprime_window():
    p = JacobiParams(6, 1, 1)
    dp = derive_params(p)
    g = global_max(lambda x: eval_M(p, x), Interval(-1, 1), envelope_grid_size(dp, 4000, True))
    assert localization_windows(dp).n_prime.contains(g.x_star)


def test_windows_k6_alpha_beta_1():
    dp = derive_params(JacobiParams(6, 1, 1))
    w = localization_windows(dp)
    assert w.chain_holds(delta_interval(dp))
    assert w.eps_minus > 0 and w.eps_plus > 0
    assert math.cos(dp.tau_prime) ** 2 / math.cos(dp.tau) ** 2 > 12 / 13


def test_windows_need_k1():
    with pytest.raises(DomainError):
        localization_windows(derive_params(JacobiParams(0, 1, 1)))


theorem2_params = st.builds(
    lambda k, a, b: JacobiParams(k, max(a, b), min(a, b)),
    st.integers(6, 60),
    st.floats(THEOREM2_BETA_MIN, 200),
    st.floats(THEOREM2_BETA_MIN, 200),
)


@given(theorem2_params)
def test_window_chain_and_eps_bound(p):
    dp = derive_params(p)
    w = localization_windows(dp)
    assert w.chain_holds(delta_interval(dp))
    c3 = (math.cos(dp.tau) * math.cos(dp.omega)) ** 3
    for e in (w.eps_minus, w.eps_plus):
        assert e**3 / c3 <= 2 / (2 * p.k + 1) ** 2 <= 2 / 169


@given(st.integers(1, 25), st.floats(0, 30), st.floats(0, 30))
def test_m_has_k_plus_1_maxima(k, a, b):
    p = JacobiParams(k, max(a, b), min(a, b))
    dp = derive_params(p)
    ex = find_local_extrema(lambda x: eval_M(p, x), Interval(-1, 1), envelope_grid_size(dp, 2000, True))
    assert len(ex.maxima) == k + 1
    xs = [e.x for e in ex.points]
    assert xs == sorted(xs)
    # maxima and minima alternate
    kinds = [e.kind for e in ex.points]
    assert all(a != b for a, b in zip(kinds, kinds[1:]))
