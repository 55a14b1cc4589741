"""Sonin's function for the damped envelope Z and the location of its peak.

Z satisfies Z'' - 2A Z' + B Z = 0 on (delta_{-1}, delta_1). Sonin's function
S = Z^2 + Z'^2 / B touches Z^2 at every critical point of Z, and its slope
has the sign of D(x) = 2 (1-x^2)^2 d^3 (4AB - B'), a sextic in x whose
coefficients depend on q and s only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .jacobi import orthonormal_scaled, z_log_prefactor
from .params import (
    DerivedParams,
    DomainError,
    Interval,
    JacobiParams,
    d_of_x,
    delta_interval,
    derive_params,
)

BISECT_WIDTH = 1e-13
INTERIOR_MARGIN = 1e-9


@dataclass(frozen=True)
class SoninCoeffs:
    A: float | np.ndarray
    B: float | np.ndarray
    E: float | np.ndarray
    D: float | np.ndarray


@dataclass(frozen=True)
class X0Result:
    x0: float
    theta: float
    bracket: Interval
    iterations: int
    path: str  # "bracket", "exact" or "scan"


def coef_A(dp: DerivedParams, x):
    q, s = dp.q, dp.s
    x = np.asarray(x, dtype=float)
    num = x**3 + 3 * q * s * x**2 + (2 * q * q + 2 * s * s - 1) * x + q * s
    return -num / (2.0 * (1.0 - x * x) * d_of_x(dp, x))


def coef_E(dp: DerivedParams, x):
    q, s = dp.q, dp.s
    q2, s2 = q * q, s * s
    x = np.asarray(x, dtype=float)
    return (
        2 * q * s * x**3
        - (1 - 4 * q2 - 4 * s2 + q2 * s2) * x**2
        + 6 * q * s * x
        + 1 - q2 * q2 - s2 * s2 + 3 * q2 * s2
    )


def coef_B(dp: DerivedParams, x):
    x = np.asarray(x, dtype=float)
    d = d_of_x(dp, x)
    one = 1.0 - x * x
    return d * dp.r**2 / (4.0 * one * one) + coef_E(dp, x) / (4.0 * one * d * d)


def d_poly_coefficients(q: float, s: float) -> list[float]:
    """Coefficients of D from x^6 down to x^0.

    The x^4 coefficient is qs(12 - 9q^2 - 9s^2 + q^2 s^2); this is what the
    definition D = 2(1-x^2)^2 d^3 (4AB - B') expands to.
    """
    q2, s2 = q * q, s * s
    q4, s4 = q2 * q2, s2 * s2
    qs = q * s
    return [
        qs,
        4 * q2 + 4 * s2 - 5 * q2 * s2 - 1,
        qs * (12 - 9 * q2 - 9 * s2 + q2 * s2),
        2 * (1 + q2 + s2 - 5 * q4 - 5 * s4 - 5 * q2 * s2 + q4 * s2 + q2 * s4),
        -qs * (7 + 10 * q2 + 10 * s2 - 4 * q2 * s2 + q4 + s4),
        -(1 + 6 * q2 + 6 * s2 - 6 * q4 - 6 * s4 - q4 * q2 - s4 * s2
          + 9 * q2 * s2 + 3 * q2 * s4 + 3 * q4 * s2),
        -3 * qs * (2 - q2 - s2 - q4 - s4 + 3 * q2 * s2),
    ]


def coef_D(dp: DerivedParams, x):
    x = np.asarray(x, dtype=float)
    acc = np.zeros_like(x)
    for c in d_poly_coefficients(dp.q, dp.s):
        acc = acc * x + c
    return float(acc) if acc.ndim == 0 else acc


def d_at_delta_closed_form(dp: DerivedParams, j: int) -> float:
    """D(delta_j) = -15 j cos^3(tau) cos^3(omega) sin^4(tau + j omega)."""
    if j not in (-1, 1):
        raise ValueError("j must be +1 or -1")
    c = math.cos(dp.tau) * math.cos(dp.omega)
    return -15.0 * j * c**3 * math.sin(dp.tau + j * dp.omega) ** 4


def _require_interior(dp: DerivedParams, x) -> np.ndarray:
    xa = np.asarray(x, dtype=float)
    iv = delta_interval(dp)
    if np.any(xa <= iv.lo) or np.any(xa >= iv.hi) or np.any(np.abs(xa) >= 1.0):
        raise DomainError("x must lie strictly inside (delta_-1, delta_1) and (-1, 1)")
    if np.any((1.0 - xa * xa) * d_of_x(dp, xa) <= 0.0):
        raise DomainError("(1 - x^2) d(x) vanishes at x")
    return xa


def sonin_coeffs(dp: DerivedParams, x) -> SoninCoeffs:
    xa = _require_interior(dp, x)
    sq = lambda v: float(v) if np.ndim(v) == 0 else v  # noqa: E731
    return SoninCoeffs(
        A=sq(coef_A(dp, xa)), B=sq(coef_B(dp, xa)), E=sq(coef_E(dp, xa)), D=sq(coef_D(dp, xa))
    )


def z_and_derivative(p: JacobiParams, x) -> tuple[np.ndarray, np.ndarray]:
    """Z(x) and Z'(x) at interior points.

    With Z = G * Pn, G = (d w^2)^(1/4), Z' = G * (Pn * L + Pn') where
    L = d'/(4d) - alpha/(2(1-x)) + beta/(2(1+x)) is the log-derivative of G.
    Both terms are scaled by G before exponentiation, so zeros of Pn are fine.
    """
    dp = derive_params(p)
    x = np.asarray(x, dtype=float)
    d = d_of_x(dp, x)
    lg = z_log_prefactor(p, x, d)
    val, der = orthonormal_scaled(p, x, lg)
    dd = -2.0 * dp.q * dp.s - 2.0 * x
    L = dd / (4.0 * d) - p.alpha / (2.0 * (1.0 - x)) + p.beta / (2.0 * (1.0 + x))
    return val, val * L + der


def sonin_S(p: JacobiParams, x):
    dp = derive_params(p)
    xa = _require_interior(dp, x)
    B = coef_B(dp, xa)
    if np.any(B <= 0.0):
        bad = np.atleast_1d(xa)[np.atleast_1d(B) <= 0.0][0]
        raise DomainError(f"B(x) <= 0 at x = {bad!r}; contradicts positivity of B inside the envelope")
    z, zp = z_and_derivative(p, xa)
    out = z * z + zp * zp / B
    return float(out) if np.ndim(out) == 0 else out


def lemma_bracket(dp: DerivedParams) -> Interval:
    """[-qs - (2/3) sqrt((1-q^2)(1-s^2)), -qs]."""
    centre = -dp.q * dp.s
    return Interval(centre - (2.0 / 3.0) * dp.cos_prod, centre)


def _bisect(dp: DerivedParams, lo: float, hi: float) -> tuple[float, int]:
    """Bisection for a D root with D(lo) > 0 > D(hi)."""
    it = 0
    while hi - lo >= BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        dm = coef_D(dp, mid)
        if dm == 0.0:
            return mid, it + 1
        if dm > 0.0:
            lo = mid
        else:
            hi = mid
        it += 1
    return 0.5 * (lo + hi), it


def find_x0(dp: DerivedParams) -> X0Result:
    p = dp.params
    if p.k < 1 or not p.alpha >= p.beta >= 0.0:
        raise DomainError("locating x0 requires k >= 1 and alpha >= beta >= 0")
    c = dp.cos_prod
    br = lemma_bracket(dp)
    d_lo, d_hi = coef_D(dp, br.lo), coef_D(dp, br.hi)
    if d_hi == 0.0:
        x0, it, path = br.hi, 0, "exact"
    elif d_lo > 0.0 > d_hi:
        x0, it = _bisect(dp, br.lo, br.hi)
        path = "bracket"
    else:
        iv = delta_interval(dp)
        eps = INTERIOR_MARGIN * iv.width
        grid = np.linspace(iv.lo + eps, iv.hi - eps, 2001)
        vals = coef_D(dp, grid)
        idx = np.nonzero((vals[:-1] > 0.0) & (vals[1:] <= 0.0))[0]
        if idx.size == 0:
            raise ArithmeticError("D has no sign change inside the envelope interval")
        i = int(idx[0])
        br = Interval(float(grid[i]), float(grid[i + 1]))
        x0, it = _bisect(dp, br.lo, br.hi)
        path = "scan"
    theta = (-dp.q * dp.s - x0) / c
    return X0Result(x0=float(x0), theta=float(theta), bracket=br, iterations=it, path=path)
