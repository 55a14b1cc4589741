"""Theorem checks, identity suites, conjecture metrics and parameter sweeps."""
from __future__ import annotations

import math
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .extrema import envelope_grid_size, find_local_maxima, global_max, localization_windows
from .jacobi import derivative_signed_log, eval_M, eval_weighted_sq, eval_Z, jacobi_signed_log
from .oscillatory import (
    mu_radical,
    check_integral_identity,
    mu,
    mu_product_closed,
    pointwise_bound_check,
    w_envelope_check,
    weighted_w_integrand,
    wronskian_direct,
    wronskian_from_w,
)
from .params import (
    DomainError,
    Interval,
    JacobiParams,
    delta_interval,
    derive_params,
)
from .quadrature import integrate
from .sonin import (
    coef_D,
    d_at_delta_closed_form,
    d_poly_coefficients,
    find_x0,
    lemma_bracket,
    sonin_S,
    z_and_derivative,
)

THEOREM1_RHS = 5.0 ** (-0.25) * math.sqrt(3.0)
PLATEAU = 2.0 / math.pi
IDENTITY_TOLS = {
    "id_d_delta": 1e-9,
    "id_mu_product": 1e-12,
    "id_ode": 1e-9,
    "id_wronskian": 1e-10,
    "id_integral": 1e-6,
}
IDENTITY_POINTS = 64
SONIN_SAMPLES = 100
SONIN_PEAK_RTOL = 1e-8
SONIN_ZP_FLOOR = 1e-8
SONIN_NOISE_ULPS = 64
DEFAULT_SAMPLES = 4000


@dataclass
class ReportItem:
    params: JacobiParams
    check: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    witness_x: Optional[float] = None
    extra: dict = field(default_factory=dict)

    @property
    def sort_key(self):
        return (self.params.k, self.params.alpha, self.params.beta, self.check)


@dataclass(frozen=True)
class GridSpec:
    k_values: tuple[int, ...]
    alpha_values: tuple[float, ...]
    beta_values: tuple[float, ...]
    checks: tuple[str, ...] = ("theorem1",)
    samples: int = DEFAULT_SAMPLES
    seed: int = 0

    def __post_init__(self):
        if not (self.k_values and self.alpha_values and self.beta_values and self.checks):
            raise ValueError("grid lists must be non-empty")
        if self.samples < 1000:
            raise ValueError("samples must be at least 1000")
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")


@dataclass
class VerificationReport:
    items: list[ReportItem]
    skipped: int = 0
    filtered: int = 0

    @property
    def summary(self) -> dict:
        passed = sum(1 for it in self.items if it.passed)
        margins = [it.margin for it in self.items if math.isfinite(it.margin)]
        return {
            "total": len(self.items),
            "passed": passed,
            "failed": len(self.items) - passed,
            "min_margin": min(margins) if margins else None,
            "skipped": self.skipped,
            "filtered": self.filtered,
            "empty": not self.items,
        }

    @property
    def ok(self) -> bool:
        return all(it.passed for it in self.items)


def _item(p, check, lhs, rhs, passed, witness_x=None, margin=None, **extra) -> ReportItem:
    if margin is None:
        margin = (rhs - lhs) / rhs if rhs != 0 else -lhs
    wx = None if witness_x is None else float(witness_x)
    return ReportItem(p, check, float(lhs), float(rhs), float(margin), bool(passed), wx, extra)


def _err_item(p, check, tol, err, witness_x, **extra) -> ReportItem:
    return _item(p, check, err, tol, err < tol, witness_x, **extra)


# theorem-level checks


def verify_theorem1(p: JacobiParams, samples: int = DEFAULT_SAMPLES) -> ReportItem:
    if not p.in_theorem1_domain:
        raise DomainError("theorem1 requires k ≥ 1, α ≥ β ≥ 0")
    dp = derive_params(p)
    iv = delta_interval(dp)
    n = envelope_grid_size(dp, samples)
    g = global_max(lambda x: eval_Z(p, x) ** 2, iv, n)
    lhs = math.sqrt(g.value)
    return _item(p, "theorem1", lhs, THEOREM1_RHS, lhs < THEOREM1_RHS, g.x_star, grid=n)


def theorem2_rhs(p: JacobiParams) -> float:
    return 3.0 * p.alpha ** (1.0 / 3.0) * (1.0 + p.alpha / p.k) ** (1.0 / 6.0)


def baseline_bound(p: JacobiParams) -> float:
    return 2.0 * math.e * (2.0 + math.hypot(p.alpha, p.beta)) / math.pi


def _m_max(p: JacobiParams, samples: int):
    dp = derive_params(p)
    n = envelope_grid_size(dp, samples, on_full_interval=True)
    return global_max(lambda x: eval_M(p, x), Interval(-1.0, 1.0), n), n


def verify_theorem2(p: JacobiParams, samples: int = DEFAULT_SAMPLES) -> ReportItem:
    if not p.in_theorem2_domain:
        raise DomainError("theorem2 requires k ≥ 6, α ≥ β ≥ (1+√2)/4")
    g, n = _m_max(p, samples)
    rhs = theorem2_rhs(p)
    base = baseline_bound(p)
    # M vanishes at both ends, so an endpoint maximizer signals a broken search
    interior = -1.0 < g.x_star < 1.0
    return _item(
        p,
        "theorem2",
        g.value,
        rhs,
        g.value < rhs and interior,
        g.x_star,
        grid=n,
        baseline=base,
        smaller="new" if rhs < base else "baseline",
        below_both=g.value < min(rhs, base),
    )


def verify_grmax(p: JacobiParams, samples: int = DEFAULT_SAMPLES) -> ReportItem:
    """Every local maximum of M lies in (N'_-1, N'_1), and the windows nest."""
    if not p.in_theorem2_domain:
        raise DomainError("grmax requires k ≥ 6, α ≥ β ≥ (1+√2)/4")
    dp = derive_params(p)
    win = localization_windows(dp)
    chain = win.chain_holds(delta_interval(dp))
    n = envelope_grid_size(dp, samples, on_full_interval=True)
    maxima = find_local_maxima(lambda x: eval_M(p, x), Interval(-1.0, 1.0), n).maxima
    npr = win.n_prime
    half = 0.5 * npr.width
    if maxima:
        pos = [abs(e.x - npr.mid) / half for e in maxima]
        i = int(np.argmax(pos))
        lhs, wx = pos[i], maxima[i].x
    else:
        lhs, wx = math.inf, npr.mid
    return _item(
        p,
        "grmax",
        lhs,
        1.0,
        chain and lhs < 1.0,
        wx,
        grid=n,
        chain=chain,
        maxima=len(maxima),
        maxima_equals_k_plus_1=len(maxima) == p.k + 1,
    )


# identity suite


def _point_rng(seed: int, p: JacobiParams, salt: int = 0) -> np.random.Generator:
    words = struct.unpack("<4I", struct.pack("<dd", p.alpha, p.beta))
    return np.random.default_rng(np.random.SeedSequence([seed, p.k, salt, *words]))


def _interior_points(p: JacobiParams, rng: np.random.Generator, n: int) -> np.ndarray:
    iv = delta_interval(derive_params(p))
    lo, hi = max(iv.lo, -1.0), min(iv.hi, 1.0)
    return np.sort(lo + (hi - lo) * rng.uniform(0.001, 0.999, n))


def d_delta_error(p: JacobiParams) -> tuple[float, float]:
    """Worst error of D(delta_j) against its closed form, j = +-1.

    The error is scaled by sum |c_i| |delta|^i, the size of the terms being
    summed, which stays meaningful when D(delta_{-1}) = 0 (beta = 0).
    """
    dp = derive_params(p)
    iv = delta_interval(dp)
    coeffs = d_poly_coefficients(dp.q, dp.s)
    worst, wx = 0.0, iv.lo
    for j, x in ((-1, iv.lo), (1, iv.hi)):
        scale = sum(abs(c) * abs(x) ** (6 - i) for i, c in enumerate(coeffs))
        closed = d_at_delta_closed_form(dp, j)
        err = abs(coef_D(dp, x) - closed) / max(abs(closed), scale)
        if err > worst:
            worst, wx = err, x
    return worst, wx


def mu_product_error(p: JacobiParams, x: np.ndarray) -> tuple[float, float]:
    """Relative error of mu_-1 mu_1 against the expanded quadratic.

    Scaled by (R^2 + (rho^2 x + eta sigma)^2) / rho^2, R the radical, which is
    the magnitude of the two squares whose difference the product is.
    """
    dp = derive_params(p)
    prod = mu(dp, x, -1) * mu(dp, x, 1)
    closed = mu_product_closed(dp, x)
    lin = dp.rho**2 * x + dp.eta * dp.sigma
    scale = (mu_radical(dp) ** 2 + lin * lin) / dp.rho**2
    err = np.abs(prod - closed) / np.maximum(np.abs(closed), scale)
    i = int(np.argmax(err))
    return float(err[i]), float(x[i])


def ode_residual(p: JacobiParams, x: np.ndarray) -> tuple[float, float]:
    """Relative residual of the Jacobi differential equation at x."""
    k, a, b = p.k, p.alpha, p.beta
    s0, l0 = jacobi_signed_log(k, a, b, x)
    s1, l1 = derivative_signed_log(p, x, 1)
    s2, l2 = derivative_signed_log(p, x, 2)
    big = np.max(np.stack([l0, l1, l2]), axis=0)
    y0 = s0 * np.exp(l0 - big)
    y1 = s1 * np.exp(l1 - big)
    y2 = s2 * np.exp(l2 - big)
    terms = (
        (1.0 - x * x) * y2,
        (b - a - (a + b + 2.0) * x) * y1,
        k * (k + a + b + 1.0) * y0,
    )
    res = np.abs(sum(terms)) / np.maximum(sum(np.abs(t) for t in terms), np.finfo(float).tiny)
    i = int(np.argmax(res))
    return float(res[i]), float(x[i])


def wronskian_error(p: JacobiParams, x: np.ndarray) -> tuple[float, float]:
    v, l0 = wronskian_direct(p, x)
    m, lw = wronskian_from_w(p, x)
    err = np.abs(v * np.exp(l0 - lw) - m) / np.abs(m)
    i = int(np.argmax(err))
    return float(err[i]), float(x[i])


def verify_identities(p: JacobiParams, seed: int = 0, points: int = IDENTITY_POINTS) -> list[ReportItem]:
    if p.k < 1 or not p.alpha >= p.beta >= 0.0:
        raise DomainError("identities require k ≥ 1, α ≥ β ≥ 0")
    rng = _point_rng(seed, p, 1)
    xs = _interior_points(p, rng, points)
    tol = IDENTITY_TOLS
    items = []
    err, wx = d_delta_error(p)
    items.append(_err_item(p, "id_d_delta", tol["id_d_delta"], err, wx))
    err, wx = mu_product_error(p, xs)
    items.append(_err_item(p, "id_mu_product", tol["id_mu_product"], err, wx))
    err, wx = ode_residual(p, xs)
    items.append(_err_item(p, "id_ode", tol["id_ode"], err, wx))
    err, wx = wronskian_error(p, xs)
    items.append(_err_item(p, "id_wronskian", tol["id_wronskian"], err, wx))
    ic = check_integral_identity(p)
    # witness: where the integrand peaks
    grid = np.linspace(-1.0, 1.0, 2001)
    wx = float(grid[int(np.argmax(np.abs(weighted_w_integrand(p)(grid))))])
    items.append(
        _err_item(
            p, "id_integral", tol["id_integral"], ic.rel_err, wx,
            lhs_value=ic.lhs, rhs_value=ic.rhs, converged=ic.quad.converged,
        )
    )
    return items


# Sonin suite


def _z_sq_max(p: JacobiParams, samples: int):
    dp = derive_params(p)
    return global_max(lambda x: eval_Z(p, x) ** 2, delta_interval(dp), envelope_grid_size(dp, samples))


def sonin_sign_mismatches(p: JacobiParams, n: int = SONIN_SAMPLES) -> tuple[int, int, int, float]:
    """Compare the sign of a central difference of S with the sign of D.

    Points with |Z'| <= SONIN_ZP_FLOOR are skipped (S' vanishes there), and so
    are points where |S(x+h) - S(x-h)| is below the rounding floor of S, since
    such a difference carries no sign. Returns (mismatches, compared,
    unresolved, first mismatching x or nan).
    """
    dp = derive_params(p)
    iv = delta_interval(dp)
    xs = iv.lo + iv.width * (np.arange(n) + 0.5) / n
    h = 1e-6 * iv.width
    _, zp = z_and_derivative(p, xs)
    xs = xs[np.abs(zp) > SONIN_ZP_FLOOR]
    if xs.size == 0:
        return 0, 0, 0, math.nan
    fd = sonin_S(p, xs + h) - sonin_S(p, xs - h)
    floor = SONIN_NOISE_ULPS * (p.k + 1) * np.finfo(float).eps * sonin_S(p, xs)
    resolved = np.abs(fd) > floor
    bad = resolved & (np.sign(fd) != np.sign(coef_D(dp, xs)))
    first = float(xs[bad][0]) if bad.any() else math.nan
    return int(bad.sum()), int(resolved.sum()), int((~resolved).sum()), first


def verify_sonin(p: JacobiParams, samples: int = DEFAULT_SAMPLES) -> list[ReportItem]:
    if p.k < 1 or not p.alpha > p.beta > 0.0:
        raise DomainError("the Sonin suite requires k ≥ 1, α > β > 0")
    dp = derive_params(p)
    res = find_x0(dp)
    br = lemma_bracket(dp)
    certified = coef_D(dp, br.lo) > 0.0 > coef_D(dp, br.hi)
    in_bracket = br.lo <= res.x0 <= br.hi
    items = [
        _item(
            p, "sonin_bracket", res.theta, 2.0 / 3.0,
            res.path == "bracket" and certified and in_bracket and 0.0 < res.theta < 2.0 / 3.0,
            res.x0, path=res.path, x0=res.x0,
        )
    ]
    bad, used, unresolved, first = sonin_sign_mismatches(p)
    items.append(
        _item(
            p, "sonin_monotone", bad, 1.0, bad < 1, first if bad else res.x0,
            compared=used, unresolved=unresolved,
        )
    )
    g = _z_sq_max(p, samples)
    s0 = float(sonin_S(p, res.x0))
    gap = (s0 - g.value) / s0
    items.append(
        _item(
            p, "sonin_peak", g.value, s0, abs(gap) <= SONIN_PEAK_RTOL, g.x_star,
            rel_gap=gap, x0=res.x0,
        )
    )
    items.append(
        _item(p, "sonin_envelope", g.value, s0, g.value <= s0 * (1.0 + 1e-12), g.x_star, x0=res.x0)
    )
    return items


# oscillatory region


def verify_oscillatory(p: JacobiParams, n: int = 2000) -> list[ReportItem]:
    if p.k < 1 or not p.alpha >= p.beta >= 0.0:
        raise DomainError("oscillatory bounds require k ≥ 1, α ≥ β ≥ 0")
    out = []
    for name, fn in (("osc_pointwise", pointwise_bound_check), ("osc_w_envelope", w_envelope_check)):
        gc = fn(p, n)
        out.append(
            _item(p, name, gc.max_ratio, 1.0, gc.ok, gc.worst_x, points=gc.points,
                  violations=len(gc.violations))
        )
    return out


# conjectures


@dataclass(frozen=True)
class ConjectureMetrics:
    plateau_ratio: float
    mass: float
    x_star: float
    mass_converged: bool


def conjecture_metrics(p: JacobiParams, samples: int = DEFAULT_SAMPLES) -> ConjectureMetrics:
    if p.k < 1:
        raise DomainError("conjecture metrics require k ≥ 1")
    dp = derive_params(p)
    iv = delta_interval(dp)
    g = _z_sq_max(p, samples)
    lo, hi = max(iv.lo, -1.0), min(iv.hi, 1.0)
    q = integrate(lambda x: eval_weighted_sq(p, x, p.alpha, p.beta), lo, hi)
    return ConjectureMetrics(g.value / PLATEAU, q.value, g.x_star, q.converged)


# sweeps


def _identities(p, samples, seed):
    return verify_identities(p, seed)


def _theorem1(p, samples, seed):
    return [verify_theorem1(p, samples)]


def _theorem2(p, samples, seed):
    return [verify_theorem2(p, samples)]


def _grmax(p, samples, seed):
    return [verify_grmax(p, samples)]


def _sonin(p, samples, seed):
    return verify_sonin(p, samples)


def _osc(p, samples, seed):
    return verify_oscillatory(p)


def _identity_domain(p: JacobiParams) -> bool:
    return p.k >= 1 and p.alpha >= p.beta >= 0.0


CHECKS: dict[str, tuple[Callable[[JacobiParams], bool], Callable]] = {
    "theorem1": (lambda p: p.in_theorem1_domain, _theorem1),
    "theorem2": (lambda p: p.in_theorem2_domain, _theorem2),
    "identities": (_identity_domain, _identities),
    "grmax": (lambda p: p.in_theorem2_domain, _grmax),
    "sonin": (lambda p: p.k >= 1 and p.alpha > p.beta > 0.0, _sonin),
    "osc": (_identity_domain, _osc),
}


def _run_task(task) -> list[ReportItem]:
    name, p, samples, seed = task
    fn = CHECKS[name][1]
    try:
        return fn(p, samples, seed)
    except (ArithmeticError, DomainError, ValueError) as exc:
        # recorded, never raised: one bad point must not abort a sweep
        return [_item(p, name, math.nan, math.nan, False, math.nan, margin=math.nan, error=str(exc))]


def plan_tasks(g: GridSpec) -> tuple[list, int, int]:
    tasks, skipped, filtered = [], 0, 0
    for k in g.k_values:
        for a in g.alpha_values:
            for b in g.beta_values:
                if b > a:
                    skipped += 1
                    continue
                p = JacobiParams(k, a, b)
                for name in g.checks:
                    if CHECKS[name][0](p):
                        tasks.append((name, p, g.samples, g.seed))
                    else:
                        filtered += 1
    return tasks, skipped, filtered


def sweep(g: GridSpec, workers: int = 1) -> VerificationReport:
    tasks, skipped, filtered = plan_tasks(g)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(_run_task, tasks, chunksize=max(1, len(tasks) // (8 * workers))))
    else:
        chunks = [_run_task(t) for t in tasks]
    items = sorted((it for ch in chunks for it in ch), key=lambda it: it.sort_key)
    return VerificationReport(items, skipped, filtered)


def random_param_sets(
    n: int, seed: int, k_max: int = 50, ab_max: float = 50.0, strict: bool = False
) -> list[JacobiParams]:
    """Seeded (k, alpha, beta) with 1 <= k <= k_max and 0 <= beta <= alpha <= ab_max.

    strict=True draws alpha > beta > 0.
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        k = int(rng.integers(1, k_max + 1))
        a, b = sorted(rng.uniform(0.0, ab_max, 2), reverse=True)
        if strict and not a > b > 0.0:
            continue
        out.append(JacobiParams(k, float(a), float(b)))
    return out


def run_checks(params: Sequence[JacobiParams], fn: Callable, workers: int = 1) -> list:
    """Map fn over params, optionally in worker processes; order preserved."""
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, params))
    return [fn(p) for p in params]
