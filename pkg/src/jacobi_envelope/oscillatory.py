"""Bounds in the oscillatory region via the Christoffel/Wronskian form W.

With rho = 2k + alpha + beta and y = P_k^{(alpha,beta)},

    W(x) = (rho^2 - sigma^2) y^2 - 4 (eta + sigma x) y y' + 4 (1 - x^2) y'^2,

and P_{k-1} P_k' - P_k P_{k-1}' = rho / (2 (rho^2 - eta^2)) * W(x).
Quantities that carry h_k^2 are also reported divided by h_k^2, which is how
they are compared internally (the raw values overflow for large parameters).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .jacobi import (
    derivative_signed_log,
    jacobi_signed_log,
    log_norm,
    log_weight,
    orthonormal_scaled,
)
from .params import (
    DerivedParams,
    DomainError,
    Interval,
    JacobiParams,
    d_of_x,
    derive_params,
)
from .quadrature import QuadResult, integrate

WINDOW_GRID = 2000
ENVELOPE_SLACK = 1e-12


@dataclass(frozen=True)
class OscWindow:
    gamma_minus: float
    gamma_plus: float

    @property
    def interval(self) -> Interval:
        return Interval(self.gamma_minus, self.gamma_plus, False, False)


@dataclass(frozen=True)
class WValue:
    raw: float | np.ndarray
    weighted: float | np.ndarray
    weighted_over_norm: float | np.ndarray


@dataclass(frozen=True)
class IntegralCheck:
    lhs: float
    rhs: float
    rel_err: float
    quad: QuadResult


@dataclass
class GridCheck:
    """Outcome of checking an inequality lhs(x) < rhs(x) on a grid of the window."""

    ok: bool
    points: int
    max_ratio: float
    worst_x: float
    violations: list[tuple[float, float, float]] = field(default_factory=list)


def _require_k1(dp: DerivedParams) -> None:
    if dp.params.k < 1:
        raise DomainError("the oscillatory-region bounds need k >= 1")


def mu_radical(dp: DerivedParams) -> float:
    rho, eta, sig = dp.rho, dp.eta, dp.sigma
    return math.sqrt((rho * rho - eta * eta) * (rho * rho - sig * sig))


def mu(dp: DerivedParams, x, j: int):
    if j not in (-1, 1):
        raise ValueError("j must be +1 or -1")
    x = np.asarray(x, dtype=float)
    out = (mu_radical(dp) + j * (x * dp.rho**2 + dp.eta * dp.sigma)) / dp.rho
    return float(out) if out.ndim == 0 else out


def mu_product_closed(dp: DerivedParams, x):
    """mu_{-1} mu_1 = (1 - x^2) rho^2 - 2 eta sigma x - eta^2 - sigma^2."""
    x = np.asarray(x, dtype=float)
    rho, eta, sig = dp.rho, dp.eta, dp.sigma
    out = (1.0 - x * x) * rho * rho - 2.0 * eta * sig * x - eta * eta - sig * sig
    return float(out) if out.ndim == 0 else out


def osc_window(dp: DerivedParams) -> OscWindow:
    _require_k1(dp)
    rho2 = dp.rho**2
    rad = mu_radical(dp)
    es = dp.eta * dp.sigma
    return OscWindow((-rad - es) / rho2, (rad - es) / rho2)


def _wform(dp: DerivedParams, x, y, yp):
    return (
        (dp.rho**2 - dp.sigma**2) * y * y
        - 4.0 * (dp.eta + dp.sigma * x) * y * yp
        + 4.0 * (1.0 - x * x) * yp * yp
    )


def _w_scaled(p: JacobiParams, x, log_extra):
    """W computed from y and y' pre-multiplied by exp(log_extra)/h_k."""
    dp = derive_params(p)
    y, yp = orthonormal_scaled(p, x, log_extra)
    return _wform(dp, x, y, yp)


def eval_W(p: JacobiParams, x) -> WValue:
    dp = derive_params(p)
    _require_k1(dp)
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) >= 1.0):
        raise DomainError("W is evaluated on (-1, 1)")
    log_h = log_norm(p).log_hk
    # W/h^2 from orthonormal values, then rescale
    w_on = _w_scaled(p, xa, 0.0)
    lw = log_weight(xa, p.alpha + 1.0, p.beta + 1.0)
    half = 0.5 * lw
    weighted_on = _w_scaled(p, xa, half)
    with np.errstate(over="ignore"):
        raw = w_on * np.exp(2.0 * log_h)
        weighted = weighted_on * np.exp(2.0 * log_h)
    sq = lambda v: float(v) if np.ndim(v) == 0 else v  # noqa: E731
    return WValue(sq(raw), sq(weighted), sq(weighted_on))


def wronskian_direct(p: JacobiParams, x) -> tuple[np.ndarray, float]:
    """(P_{k-1} P_k' - P_k P_{k-1}') / exp(L0) and the shared log scale L0.

    Evaluated from the recurrences alone, independently of W.
    """
    k, a, b = p.k, p.alpha, p.beta
    x = np.asarray(x, dtype=float)
    s1, l1 = jacobi_signed_log(k - 1, a, b, x)
    s2, l2 = derivative_signed_log(p, x, 1)
    s3, l3 = jacobi_signed_log(k, a, b, x)
    s4, l4 = derivative_signed_log(JacobiParams(k - 1, a, b), x, 1)
    t1 = l1 + l2
    t2 = l3 + l4
    L0 = np.maximum(t1, t2)
    v = s1 * s2 * np.exp(t1 - L0) - s3 * s4 * np.exp(t2 - L0)
    return v, L0


def wronskian_from_w(p: JacobiParams, x) -> tuple[np.ndarray, np.ndarray]:
    """rho/(2(rho^2-eta^2)) W(x), as (mantissa, log scale) with scale 2 log h_k."""
    dp = derive_params(p)
    w_on = _w_scaled(p, x, 0.0)
    factor = dp.rho / (2.0 * (dp.rho**2 - dp.eta**2))
    return factor * w_on, np.full(np.shape(w_on), 2.0 * log_norm(p).log_hk)


def pointwise_bound(dp: DerivedParams, x):
    """sqrt((1-q^2)(1-s^2)) / d(x), valid on the window J."""
    win = osc_window(dp).interval
    xa = np.asarray(x, dtype=float)
    if not np.all(win.contains(xa)):
        raise DomainError(f"x must lie in the window J = ({win.lo:.17g}, {win.hi:.17g})")
    out = dp.cos_prod / d_of_x(dp, xa)
    return float(out) if np.ndim(out) == 0 else out


def w_envelope_bound_over_norm(dp: DerivedParams) -> float:
    """rho sqrt((rho^2-eta^2)(rho^2-sigma^2)) / (rho - 1), i.e. the bound over h_k^2."""
    return dp.rho * mu_radical(dp) / (dp.rho - 1.0)


def weighted_w_integrand(p: JacobiParams):
    """x -> (1-x)^(alpha+1) (1+x)^(beta+1) W(x) / h_k^2, vectorized."""
    a1, b1 = p.alpha + 1.0, p.beta + 1.0

    def f(x):
        return _w_scaled(p, x, 0.5 * log_weight(x, a1, b1))

    return f


def check_integral_identity(p: JacobiParams, tol: float = 1e-10) -> IntegralCheck:
    dp = derive_params(p)
    _require_k1(dp)
    quad = integrate(weighted_w_integrand(p), -1.0, 1.0, rel_tol=tol, abs_tol=tol)
    rho, eta, sig = dp.rho, dp.eta, dp.sigma
    rhs_on = (rho**2 - eta**2) * (rho**2 - sig**2) / (rho * (rho - 1.0))
    rel = abs(quad.value - rhs_on) / abs(rhs_on)
    with np.errstate(over="ignore"):
        h2 = math.exp(min(2.0 * log_norm(p).log_hk, 709.0))
    return IntegralCheck(lhs=quad.value * h2, rhs=rhs_on * h2, rel_err=rel, quad=quad)


def chebyshev_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """n Chebyshev points of the first kind on (lo, hi), ascending, all interior."""
    i = np.arange(n)
    t = -np.cos(np.pi * (i + 0.5) / n)
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * t


def _grid_check(xs, lhs, rhs) -> GridCheck:
    ratio = lhs / rhs
    bad = ~(lhs < rhs)
    i = int(np.argmax(ratio))
    return GridCheck(
        ok=not bad.any(),
        points=len(xs),
        max_ratio=float(ratio[i]),
        worst_x=float(xs[i]),
        violations=[(float(x), float(a), float(b)) for x, a, b in zip(xs[bad], lhs[bad], rhs[bad])],
    )


def pointwise_bound_check(p: JacobiParams, n: int = WINDOW_GRID) -> GridCheck:
    """w(x) Pn(x)^2 < sqrt((1-q^2)(1-s^2))/d(x) on a Chebyshev grid of J."""
    dp = derive_params(p)
    win = osc_window(dp)
    xs = chebyshev_grid(win.gamma_minus, win.gamma_plus, n)
    y, _ = orthonormal_scaled(p, xs, 0.5 * log_weight(xs, p.alpha, p.beta))
    return _grid_check(xs, y * y, pointwise_bound(dp, xs))


def w_envelope_check(p: JacobiParams, n: int = WINDOW_GRID) -> GridCheck:
    """(1-x)^(a+1)(1+x)^(b+1) W / h^2 <= rho sqrt(...)/(rho-1) on a grid of J."""
    dp = derive_params(p)
    win = osc_window(dp)
    xs = chebyshev_grid(win.gamma_minus, win.gamma_plus, n)
    lhs = weighted_w_integrand(p)(xs)
    bound = w_envelope_bound_over_norm(dp)
    return _grid_check(xs, lhs, np.full_like(xs, bound * (1.0 + ENVELOPE_SLACK)))
