"""Parameter algebra for Jacobi envelopes.

The triple (k, alpha, beta) is re-expressed through

    eta = alpha - beta,   sigma = alpha + beta,   r = 2k + alpha + beta + 1,
    q = eta / r = sin(omega),   s = sigma / r = sin(tau),

in which the envelope interval is simply delta_j = j cos(tau + j omega).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

THEOREM2_BETA_MIN = (1.0 + math.sqrt(2.0)) / 4.0
ANGLE_ZERO_TOL = 1e-15
DELTA_AGREEMENT_RTOL = 1e-12


class DomainError(ValueError):
    """Raised when an input violates a hypothesis of the requested operation."""


class ConsistencyError(ArithmeticError):
    """Two algebraically identical evaluation routes disagree."""


@dataclass(frozen=True)
class JacobiParams:
    k: int
    alpha: float
    beta: float

    def __post_init__(self):
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 0:
            raise DomainError(f"degree k must be a nonnegative integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise DomainError("alpha and beta must be finite")
        if self.alpha <= -1.0 or self.beta <= -1.0:
            raise DomainError("weight not integrable: need alpha > -1 and beta > -1")

    @classmethod
    def from_strings(cls, k: str, alpha: str, beta: str) -> "JacobiParams":
        return cls(int(k), float(alpha), float(beta))

    @property
    def in_theorem1_domain(self) -> bool:
        return self.k >= 1 and self.alpha >= self.beta >= 0.0

    @property
    def in_theorem2_domain(self) -> bool:
        return self.k >= 6 and self.alpha >= self.beta >= THEOREM2_BETA_MIN

    @property
    def strictly_ordered(self) -> bool:
        """alpha > beta > 0, the non-degenerate case; equality cases are limits."""
        return self.alpha > self.beta > 0.0


@dataclass(frozen=True)
class DerivedParams:
    params: JacobiParams
    eta: float
    sigma: float
    r: float
    rho: float
    q: float
    s: float
    omega: float
    tau: float
    tau_prime: Optional[float]

    @property
    def cos_prod(self) -> float:
        """cos(tau) cos(omega) = sqrt((1 - q^2)(1 - s^2))."""
        return math.sqrt((1.0 - self.q * self.q) * (1.0 - self.s * self.s))


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x) -> bool | np.ndarray:
        x = np.asarray(x, dtype=float)
        left = x >= self.lo if self.lo_closed else x > self.lo
        right = x <= self.hi if self.hi_closed else x < self.hi
        out = left & right
        return bool(out) if out.ndim == 0 else out

    def strictly_inside(self, other: "Interval") -> bool:
        """True when the closure of self lies in the interior of other."""
        return other.lo < self.lo and self.hi < other.hi

    def as_tuple(self) -> tuple[float, float]:
        return (self.lo, self.hi)


def _angle(sin_value: float) -> float:
    if abs(sin_value) < ANGLE_ZERO_TOL:
        return 0.0
    return math.asin(sin_value)


def derive_params(p: JacobiParams) -> DerivedParams:
    eta = p.alpha - p.beta
    sigma = p.alpha + p.beta
    r = 2 * p.k + sigma + 1.0
    q = eta / r
    s = sigma / r
    sin_tp = (sigma + 1.0) / r
    # k = 0 gives sin(tau') = 1 exactly; the angle is not used there
    tau_prime = math.asin(sin_tp) if p.k >= 1 and sin_tp < 1.0 else None
    return DerivedParams(
        params=p,
        eta=eta,
        sigma=sigma,
        r=r,
        rho=r - 1.0,
        q=q,
        s=s,
        omega=_angle(q),
        tau=_angle(s),
        tau_prime=tau_prime,
    )


def _require_ordered(dp: DerivedParams) -> None:
    p = dp.params
    if not p.alpha >= p.beta >= 0.0:
        raise DomainError("envelope interval requires alpha >= beta >= 0")


def delta_radical(dp: DerivedParams) -> tuple[float, float]:
    """delta_{-1}, delta_1 from the closed radical formula.

    sqrt((2k+1)(2k+2a+1)(2k+2b+1)(2k+2a+2b+1)) / r^2 is evaluated as
    sqrt((1-q^2)(1-s^2)) so that large alpha, beta cannot overflow.
    """
    centre = -dp.q * dp.s
    half = dp.cos_prod
    return centre - half, centre + half


def delta_trig(dp: DerivedParams) -> tuple[float, float]:
    return -math.cos(dp.tau - dp.omega), math.cos(dp.tau + dp.omega)


def delta_interval(dp: DerivedParams) -> Interval:
    _require_ordered(dp)
    rad = delta_radical(dp)
    trig = delta_trig(dp)
    for a, b in zip(rad, trig):
        if abs(a - b) > DELTA_AGREEMENT_RTOL * max(1.0, abs(a)):
            raise ConsistencyError(
                f"radical and trigonometric envelope endpoints disagree: {rad} vs {trig}"
            )
    return Interval(trig[0], trig[1])


def d_of_x(dp: DerivedParams, x):
    """(x - delta_{-1})(delta_1 - x) written as 1 - q^2 - s^2 - 2qs x - x^2."""
    x = np.asarray(x, dtype=float)
    out = 1.0 - dp.q * dp.q - dp.s * dp.s - 2.0 * dp.q * dp.s * x - x * x
    return float(out) if out.ndim == 0 else out
