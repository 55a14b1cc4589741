"""Exact rational certification of the sign facts behind the peak location of Z.

A point is given by qbar = 1 - q^2 and sbar = 1 - s^2 (so qbar = cos^2 omega,
sbar = cos^2 tau) with 0 < sbar < qbar < 1. Every quantity checked here is a
polynomial in q^2 and s^2, except u_i, which carry a factor qs. We store
u_i / (qs) and use u_i^2 = q^2 s^2 (u_i / (qs))^2, so q and s themselves
never have to be rational. No floating point enters a certification path.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .params import ConsistencyError, DomainError

CORNER_WIDTH = Fraction(1, 1000)
_DEN32 = 2**32 - 1


@dataclass(frozen=True)
class RationalPoint:
    qbar: Fraction
    sbar: Fraction

    def __post_init__(self):
        for name in ("qbar", "sbar"):
            v = getattr(self, name)
            if not isinstance(v, Fraction):
                object.__setattr__(self, name, Fraction(v))
        if not (0 < self.sbar < self.qbar < 1):
            raise DomainError("a rational point needs 0 < sbar < qbar < 1")

    @classmethod
    def from_qs(cls, q, s) -> "RationalPoint":
        """Point for rational q, s with 0 < q < s < 1."""
        q, s = Fraction(q), Fraction(s)
        return cls(1 - q * q, 1 - s * s)

    @property
    def q2(self) -> Fraction:
        return 1 - self.qbar

    @property
    def s2(self) -> Fraction:
        return 1 - self.sbar


@dataclass(frozen=True)
class ProofPolyValues:
    """Coefficients of the Moebius-transformed D and derived certificates.

    v[i] + sqrt((1-q^2)(1-s^2)) u[i] is the coefficient of x^i; u[i] is
    qs * u_over_qs[i].
    """

    v: tuple[Fraction, ...]
    u_over_qs: tuple[Fraction, ...]
    w: tuple[Fraction, Fraction, Fraction]
    w_from_vu: tuple[Fraction, Fraction, Fraction]
    p1: Fraction
    p2: Fraction
    h: Fraction
    h_from_p: Fraction
    d_factor: Fraction  # 5 + q^2 + s^2 - 7 q^2 s^2


def _v_u(Q: Fraction, S: Fraction):
    c = (1 - Q) * (1 - S)
    v0 = 15 * ((S - Q) ** 2 + 8 * Q * S * c)
    v1 = 12 * (4 * c * (Q + S + 2 * Q * S) + 3 * (S - Q) ** 2)
    v2 = 27 * (S - Q) ** 2 + 40 * c * (Q + S) + 8 * (2 - Q - S + Q * S) * c
    u0 = -60 * (Q + S - 2 * Q * S)
    u1 = -96 * (1 - Q * S)
    u2 = -4 * (16 - 7 * Q - 7 * S - 2 * Q * S)
    zero = Fraction(0)
    v = (v0, v1, v2, zero, -v2, -v1, -v0)
    u = (u0, u1, u2, zero, u2, u1, u0)
    return v, u


def _w_direct(Q: Fraction, S: Fraction, qb: Fraction, sb: Fraction):
    w0 = 225 * (S - Q) ** 4
    w1 = 144 * (S - Q) ** 2 * (8 * (1 - Q * S) * (2 - Q - S) + (S - Q) ** 2)
    w2 = (
        (729 - 864 * sb + 160 * sb**2) * qb**4
        + 4 * (135 - 104 * sb - 16 * sb**2) * sb * qb**3
        + 2 * (11 - 208 * sb + 80 * sb**2) * sb**2 * qb**2
        + 108 * (5 - 8 * sb) * sb**3 * qb
        + 729 * sb**4
    )
    return w0, w1, w2


def _h_expanded(qb: Fraction, sb: Fraction) -> Fraction:
    return (
        (9 - 5 * sb) * (142884 - 43200 * sb - 21500 * sb**2 + 13625 * sb**3) * qb**4
        - 5 * (555012 - 221688 * sb + 127205 * sb**2 - 46025 * sb**3) * sb * qb**3
        + 36 * (87988 + 30790 * sb + 625 * sb**2) * sb**2 * qb**2
        - 4860 * (571 + 227 * sb) * sb**3 * qb
        + 1285956 * sb**4
    )


def eval_proof_polys(pt: RationalPoint) -> ProofPolyValues:
    Q, S, qb, sb = pt.q2, pt.s2, pt.qbar, pt.sbar
    v, u = _v_u(Q, S)
    c = (1 - Q) * (1 - S)
    w_alt = tuple(v[i] ** 2 - c * Q * S * u[i] ** 2 for i in range(3))
    w = _w_direct(Q, S, qb, sb)
    p1 = 1223 * qb * sb * (1 - qb) * (1 - sb) + 189 * (qb - sb) ** 2 + qb * sb * (93 - 88 * qb * sb)
    p2 = 3942 * qb + 3942 * sb - 6815 * qb * sb
    h_alt = 36 * p1**2 - qb * sb * (1 - qb) * (1 - sb) * p2**2
    h = _h_expanded(qb, sb)
    if w != w_alt or h != h_alt:
        raise ConsistencyError(f"closed forms disagree with their definitions at {pt}")
    return ProofPolyValues(
        v=v,
        u_over_qs=u,
        w=w,
        w_from_vu=w_alt,
        p1=p1,
        p2=p2,
        h=h,
        h_from_p=h_alt,
        d_factor=5 + Q + S - 7 * Q * S,
    )


def check_sign_pattern(pt: RationalPoint, vals: ProofPolyValues | None = None) -> bool:
    """v_i > 0, u_i < 0 and w_i > 0 for i = 0, 1, 2, plus the zero middle term.

    q, s > 0 at every valid point, so u_i and u_i / (qs) share a sign.
    """
    vals = vals or eval_proof_polys(pt)
    ok = all(vals.v[i] > 0 and vals.u_over_qs[i] < 0 and vals.w[i] > 0 for i in range(3))
    return ok and vals.v[3] == 0 and vals.u_over_qs[3] == 0


def check_bracket_endpoints(pt: RationalPoint, vals: ProofPolyValues | None = None) -> bool:
    """D(-qs) < 0 via its factored form, and h, p1, p2 > 0."""
    vals = vals or eval_proof_polys(pt)
    # D(-qs) = -qs (1-q^2)^2 (1-s^2)^2 (5 + q^2 + s^2 - 7 q^2 s^2); the prefix is negative
    prefix_negative = pt.q2 > 0 and pt.s2 > 0 and pt.qbar > 0 and pt.sbar > 0
    return prefix_negative and vals.d_factor > 0 and vals.h > 0 and vals.p1 > 0 and vals.p2 > 0


def _rand_unit(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, _DEN32 - 1), _DEN32)


def _corner_point(rng: random.Random) -> RationalPoint:
    """A point within CORNER_WIDTH of one edge of 0 < sbar < qbar < 1."""
    while True:
        edge = rng.randrange(3)
        t = _rand_unit(rng) * CORNER_WIDTH
        if edge == 0:  # sbar -> 0
            sb = t
            qb = sb + (1 - sb) * _rand_unit(rng)
        elif edge == 1:  # qbar -> 1
            qb = 1 - t
            sb = qb * _rand_unit(rng)
        else:  # sbar -> qbar
            qb = _rand_unit(rng)
            sb = qb - t * qb
        if 0 < sb < qb < 1:
            return RationalPoint(qb, sb)


def random_points(n: int, seed: int, corner_bias: float = 0.1) -> Iterator[RationalPoint]:
    """Seeded points with 32-bit numerators and denominators (corner points excepted)."""
    if not 0.0 <= corner_bias <= 1.0:
        raise ValueError("corner_bias must lie in [0, 1]")
    rng = random.Random(seed)
    for _ in range(n):
        if rng.random() < corner_bias:
            yield _corner_point(rng)
            continue
        while True:
            a, b = _rand_unit(rng), _rand_unit(rng)
            if a != b:
                break
        yield RationalPoint(max(a, b), min(a, b))


@dataclass
class CertificationSummary:
    trials: int
    seed: int
    corner_bias: float
    passed: int = 0
    failures: list[RationalPoint] = field(default_factory=list)
    label: str = "sampled certification"

    @property
    def ok(self) -> bool:
        return self.passed == self.trials and not self.failures


def certify(trials: int, seed: int, corner_bias: float = 0.1) -> CertificationSummary:
    out = CertificationSummary(trials, seed, corner_bias)
    for pt in random_points(trials, seed, corner_bias):
        vals = eval_proof_polys(pt)
        if check_sign_pattern(pt, vals) and check_bracket_endpoints(pt, vals):
            out.passed += 1
        else:
            out.failures.append(pt)
    return out
