"""Overflow-safe evaluation of Jacobi polynomials and their weighted squares.

Values are carried as (sign, natural log of magnitude). The three-term
recurrence runs on unit-scale mantissas that share one exponent per point,
so P_k^{(a,b)} stays representable for degrees and parameters in the
thousands even though the raw values do not fit in a double.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import DomainError, JacobiParams, d_of_x, delta_interval, derive_params

_RESCALE_HI = 1e150
_RESCALE_LO = 1e-150
_LOG_MAX = 709.0


@dataclass(frozen=True)
class EvalResult:
    value_sign: np.ndarray | float
    value_log: np.ndarray | float
    deriv_sign: np.ndarray | float
    deriv_log: np.ndarray | float

    @property
    def value(self):
        return self.value_sign * np.exp(self.value_log)

    @property
    def deriv(self):
        return self.deriv_sign * np.exp(self.deriv_log)


@dataclass(frozen=True)
class NormValue:
    log_hk: float

    @property
    def hk_squared(self) -> float:
        return math.exp(2.0 * self.log_hk)


def _signed_log(m: np.ndarray, scale: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    sign = np.sign(m)
    with np.errstate(divide="ignore"):
        lg = np.where(m == 0.0, -np.inf, np.log(np.abs(m)) + scale)
    return sign, lg


def jacobi_signed_log(n: int, a: float, b: float, x) -> tuple[np.ndarray, np.ndarray]:
    """sign and log|P_n^{(a,b)}(x)| in the standard normalization."""
    x = np.asarray(x, dtype=float)
    shape = x.shape
    x = np.atleast_1d(x)
    if n < 0:
        sign = np.zeros_like(x)
        lg = np.full_like(x, -np.inf)
        return sign.reshape(shape), lg.reshape(shape)
    scale = np.zeros_like(x)
    p_prev = np.ones_like(x)
    if n == 0:
        return np.ones(shape), np.zeros(shape)
    p_cur = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0
    ab = a + b
    a2b2 = a * a - b * b
    for m in range(1, n):
        c = 2.0 * m + ab
        den = 2.0 * (m + 1) * (m + ab + 1.0) * c
        lin = (c + 1.0) * ((c + 2.0) * c * x + a2b2)
        back = 2.0 * (m + a) * (m + b) * (c + 2.0)
        p_next = (lin * p_cur - back * p_prev) / den
        p_prev, p_cur = p_cur, p_next
        mag = np.maximum(np.abs(p_prev), np.abs(p_cur))
        bad = (mag > _RESCALE_HI) | ((mag < _RESCALE_LO) & (mag > 0.0))
        if bad.any():
            f = np.where(bad, mag, 1.0)
            p_prev = p_prev / f
            p_cur = p_cur / f
            scale = scale + np.log(f)
    sign, lg = _signed_log(p_cur, scale)
    return sign.reshape(shape), lg.reshape(shape)


def _check_x(x) -> np.ndarray:
    xa = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(xa)) or np.any(np.abs(xa) > 1.0):
        raise DomainError("x must lie in [-1, 1]")
    return xa


def _squeeze(v):
    v = np.asarray(v)
    return float(v) if v.ndim == 0 else v


def derivative_signed_log(p: JacobiParams, x, order: int = 1):
    """sign and log of d^order/dx^order P_k^{(alpha,beta)}(x).

    Uses dP_n^{(a,b)}/dx = (n + a + b + 1)/2 P_{n-1}^{(a+1,b+1)} repeatedly.
    """
    k, a, b = p.k, p.alpha, p.beta
    if order > k:
        xa = np.asarray(x, dtype=float)
        return np.zeros(xa.shape), np.full(xa.shape, -np.inf)
    # (k+a+b+1)/2 * ((k-1)+(a+1)+(b+1)+1)/2 * ... = prod_i (k+a+b+1+i)/2
    log_c = sum(math.log((k + a + b + 1.0 + i) / 2.0) for i in range(order))
    sign, lg = jacobi_signed_log(k - order, a + order, b + order, x)
    return sign, lg + log_c


def eval_jacobi(p: JacobiParams, x) -> EvalResult:
    xa = _check_x(x)
    vs, vl = jacobi_signed_log(p.k, p.alpha, p.beta, xa)
    ds, dl = derivative_signed_log(p, xa, 1)
    return EvalResult(_squeeze(vs), _squeeze(vl), _squeeze(ds), _squeeze(dl))


def log_norm(p: JacobiParams) -> NormValue:
    """log of h_k where h_k^2 = int_{-1}^{1} (1-x)^a (1+x)^b P_k(x)^2 dx."""
    k, a, b = p.k, p.alpha, p.beta
    lg = math.lgamma
    log_h2 = (a + b + 1.0) * math.log(2.0) + lg(k + a + 1.0) + lg(k + b + 1.0) - lg(k + 1.0)
    if k == 0:
        # (a+b+1) Gamma(a+b+1) = Gamma(a+b+2), regular at a + b = -1
        log_h2 -= lg(a + b + 2.0)
    else:
        log_h2 -= math.log(2.0 * k + a + b + 1.0) + lg(k + a + b + 1.0)
    return NormValue(0.5 * log_h2)


def log_weight(x, a: float, b: float) -> np.ndarray:
    """log((1-x)^a (1+x)^b) with 0^0 = 1."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        la = np.where(a == 0.0, 0.0, a * np.log1p(-x))
        lb = np.where(b == 0.0, 0.0, b * np.log1p(x))
    return la + lb


def _exp_checked(lg: np.ndarray) -> np.ndarray:
    finite = lg[np.isfinite(lg)]
    if finite.size and finite.max() > _LOG_MAX:
        raise OverflowError(f"result magnitude exp({finite.max():.6g}) exceeds double range")
    return np.exp(lg)


def orthonormal_scaled(p: JacobiParams, x, log_extra=0.0):
    """exp(log_extra) * (P_k(x)/h_k, P_k'(x)/h_k), computed without overflow.

    log_extra is a per-point log-weight; it is folded in before exponentiation.
    """
    x = np.asarray(x, dtype=float)
    log_h = log_norm(p).log_hk
    vs, vl = jacobi_signed_log(p.k, p.alpha, p.beta, x)
    ds, dl = derivative_signed_log(p, x, 1)
    with np.errstate(invalid="ignore"):
        val = vs * np.exp(np.where(vs == 0, -np.inf, vl + log_extra - log_h))
        der = ds * np.exp(np.where(ds == 0, -np.inf, dl + log_extra - log_h))
    val = np.where(vs == 0, 0.0, val)
    der = np.where(ds == 0, 0.0, der)
    return val, der


def orthonormal_value_scaled(p: JacobiParams, x, log_extra=0.0):
    """exp(log_extra) * P_k(x)/h_k without the derivative recurrence."""
    x = np.asarray(x, dtype=float)
    vs, vl = jacobi_signed_log(p.k, p.alpha, p.beta, x)
    with np.errstate(invalid="ignore"):
        val = vs * np.exp(np.where(vs == 0, -np.inf, vl + log_extra - log_norm(p).log_hk))
    return np.where(vs == 0, 0.0, val)


def eval_weighted_sq(p: JacobiParams, x, a: float, b: float):
    """(1-x)^a (1+x)^b (P_k(x)/h_k)^2, assembled in log space."""
    xa = _check_x(x)
    edge = np.abs(xa) == 1.0
    if np.any(edge) and (a < 0.0 or b < 0.0):
        raise DomainError("endpoint evaluation needs nonnegative weight exponents")
    vs, vl = jacobi_signed_log(p.k, p.alpha, p.beta, xa)
    lg = log_weight(xa, a, b) + 2.0 * (vl - log_norm(p).log_hk)
    lg = np.where(vs == 0, -np.inf, lg)
    return _squeeze(_exp_checked(np.asarray(lg)))


def eval_M(p: JacobiParams, x):
    return eval_weighted_sq(p, x, p.alpha + 0.5, p.beta + 0.5)


def z_log_prefactor(p: JacobiParams, x, d=None) -> np.ndarray:
    """log of sqrt(sqrt(d(x)) (1-x)^alpha (1+x)^beta); -inf where d <= 0."""
    dp = derive_params(p)
    if d is None:
        d = d_of_x(dp, x)
    d = np.asarray(d, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ld = np.where(d > 0.0, np.log(np.where(d > 0.0, d, 1.0)), -np.inf)
    return 0.25 * ld + 0.5 * log_weight(x, p.alpha, p.beta)


def eval_Z(p: JacobiParams, x):
    """Damped envelope sqrt(sqrt(d) w) * orthonormal P_k on [delta_{-1}, delta_1]."""
    dp = derive_params(p)
    iv = delta_interval(dp)
    xa = np.asarray(x, dtype=float)
    slack = 4.0 * np.finfo(float).eps
    if np.any(xa < iv.lo - slack) or np.any(xa > iv.hi + slack):
        raise DomainError(f"x must lie in [delta_-1, delta_1] = [{iv.lo:.17g}, {iv.hi:.17g}]")
    xa = np.clip(xa, max(iv.lo, -1.0), min(iv.hi, 1.0))
    return _squeeze(orthonormal_value_scaled(p, xa, z_log_prefactor(p, xa)))
