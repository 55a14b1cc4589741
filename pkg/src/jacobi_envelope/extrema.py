"""Localization windows for the extrema of M and a brute-force extremum oracle."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .params import DerivedParams, DomainError, Interval, delta_interval

GOLDEN_XTOL = 1e-12
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class LocalizationWindows:
    n_prime: Interval
    n: Interval
    eps_minus: float
    eps_plus: float

    def chain_holds(self, delta: Interval) -> bool:
        """(N'_-1, N'_1) inside (N_-1, N_1) inside (delta_-1, delta_1)."""
        return (
            delta.lo <= self.n.lo <= self.n_prime.lo
            and self.n_prime.hi <= self.n.hi <= delta.hi
            and self.n.lo < self.n.hi
        )


@dataclass(frozen=True)
class Extremum:
    x: float
    value: float
    kind: str  # "max" or "min"


@dataclass
class ExtremaSet:
    points: list[Extremum] = field(default_factory=list)

    @property
    def maxima(self) -> list[Extremum]:
        return [e for e in self.points if e.kind == "max"]

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class GlobalMax:
    x_star: float
    value: float


def _eps(tau: float, omega: float, r: float, j: int) -> float:
    return (math.sin(tau + j * omega) ** 4 / (2.0 * math.cos(tau) * math.cos(omega))) ** (1 / 3) * r ** (
        -2.0 / 3.0
    )


def _window(tau: float, omega: float, r: float, coef: float) -> Interval:
    ends = []
    for j in (-1, 1):
        ends.append(j * (math.cos(tau + j * omega) - coef * _eps(tau, omega, r, j)))
    return Interval(ends[0], ends[1], False, False)


def localization_windows(dp: DerivedParams) -> LocalizationWindows:
    if dp.tau_prime is None:
        raise DomainError("sin(tau') = (alpha+beta+1)/r is 1 at k = 0; windows need k >= 1")
    return LocalizationWindows(
        n_prime=_window(dp.tau_prime, dp.omega, dp.r, 3.0 / 10.0),
        n=_window(dp.tau, dp.omega, dp.r, 5.0 / 17.0),
        eps_minus=_eps(dp.tau, dp.omega, dp.r, -1),
        eps_plus=_eps(dp.tau, dp.omega, dp.r, 1),
    )


def golden_max(f: Callable, lo, hi, xtol: float = GOLDEN_XTOL):
    """Vectorized golden-section search: one maximizer per bracket [lo_i, hi_i]."""
    a = np.array(lo, dtype=float, copy=True)
    b = np.array(hi, dtype=float, copy=True)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = np.asarray(f(c), dtype=float)
    fd = np.asarray(f(d), dtype=float)
    while np.any(b - a > xtol):
        left = fc >= fd  # maximizer in [a, d]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - _INVPHI * (b - a)
        new_d = a + _INVPHI * (b - a)
        # reuse the surviving interior point, evaluate only the new one
        probe = np.where(left, new_c, new_d)
        fp = np.asarray(f(probe), dtype=float)
        fc, fd, c, d = (
            np.where(left, fp, fd),
            np.where(left, fc, fp),
            np.where(left, new_c, d),
            np.where(left, c, new_d),
        )
        if np.all(b - a <= xtol) or np.all((c <= a) | (d >= b)):
            break
    x = np.where(fc >= fd, c, d)
    return x, np.maximum(fc, fd)


def _scan(f: Callable, iv: Interval, grid: int):
    if iv.width <= 0.0:
        raise ValueError("extremum search needs a non-empty interval")
    if grid < 3:
        raise ValueError("grid must have at least 3 points")
    xs = np.linspace(iv.lo, iv.hi, grid)
    return xs, np.asarray(f(xs), dtype=float)


def _strict_peaks(v: np.ndarray) -> np.ndarray:
    """Interior indices i with v[i-1] < v[i] >= v[i+1] (plateaus counted once)."""
    return np.nonzero((v[1:-1] > v[:-2]) & (v[1:-1] >= v[2:]))[0] + 1


def find_local_extrema(f: Callable, iv: Interval, grid: int) -> ExtremaSet:
    xs, v = _scan(f, iv, grid)
    pts: list[Extremum] = []
    for kind, sgn in (("max", 1.0), ("min", -1.0)):
        idx = _strict_peaks(sgn * v)
        if idx.size == 0:
            continue
        g = lambda t, s=sgn: s * np.asarray(f(t), dtype=float)  # noqa: E731
        x, val = golden_max(g, xs[idx - 1], xs[idx + 1])
        pts += [Extremum(float(a), float(sgn * b), kind) for a, b in zip(x, val)]
    pts.sort(key=lambda e: e.x)
    return ExtremaSet(pts)


def find_local_maxima(f: Callable, iv: Interval, grid: int) -> ExtremaSet:
    """Dense-grid scan for strict local maxima, each refined by golden section."""
    xs, v = _scan(f, iv, grid)
    idx = _strict_peaks(v)
    if idx.size == 0:
        return ExtremaSet([])
    x, val = golden_max(f, xs[idx - 1], xs[idx + 1])
    return ExtremaSet([Extremum(float(a), float(b), "max") for a, b in zip(x, val)])


def global_max(f: Callable, iv: Interval, grid: int, band: float = 1e-2) -> GlobalMax:
    """Largest value of f on iv.

    Only grid peaks within a relative band of the best grid value are refined;
    with at least ~100 grid points per oscillation the grid value of a peak is
    within about 5e-4 of its true height, well inside the default band.
    Closed endpoints compete with the interior peaks.
    """
    xs, v = _scan(f, iv, grid)
    best_x, best_v = None, -np.inf
    idx = _strict_peaks(v)
    if idx.size:
        top = v[idx].max()
        keep = idx[v[idx] >= top - band * abs(top)]
        x, val = golden_max(f, xs[keep - 1], xs[keep + 1])
        i = int(np.argmax(val))
        best_x, best_v = float(x[i]), float(val[i])
    for closed, j in ((iv.lo_closed, 0), (iv.hi_closed, -1)):
        if closed and v[j] > best_v:
            best_x, best_v = float(xs[j]), float(v[j])
    if best_x is None:
        i = int(np.argmax(v[1:-1])) + 1
        best_x, best_v = float(xs[i]), float(v[i])
    return GlobalMax(best_x, best_v)


def envelope_grid_size(dp: DerivedParams, samples: int, on_full_interval: bool = False) -> int:
    """Grid size honouring ~100 points per oscillation of a degree-k quantity.

    When scanning all of [-1, 1], the oscillations live on [delta_-1, delta_1],
    so the count is scaled up by 2 / (delta_1 - delta_-1).
    """
    base = 100 * (dp.params.k + 1)
    if on_full_interval:
        width = delta_interval(dp).width
        base = int(math.ceil(base * 2.0 / max(width, 1e-6)))
    return max(int(samples), base)
