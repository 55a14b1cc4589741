"""Command-line entry point.

Exit codes: 0 when every requested check passes, 1 when any fails, 2 on a
usage error or when the inputs violate the hypotheses of the request.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .extrema import localization_windows
from .jacobi import eval_jacobi, eval_M, eval_Z, orthonormal_scaled
from .lemmas import certify
from .oscillatory import eval_W, osc_window
from .params import DomainError, JacobiParams, delta_interval, derive_params
from .report import report_to_csv, report_to_json
from .sonin import find_x0, sonin_S
from .verifier import DEFAULT_SAMPLES, GridSpec, conjecture_metrics, sweep, verify_theorem1

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DOMAIN_MESSAGES = {
    "theorem1": "theorem1 requires k ≥ 1, α ≥ β ≥ 0",
    "theorem2": "theorem2 requires k ≥ 6, α ≥ β ≥ (1+√2)/4",
    "grmax": "grmax requires k ≥ 6, α ≥ β ≥ (1+√2)/4",
    "identities": "identities require k ≥ 1, α ≥ β ≥ 0",
}


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if x is None:
        return "n/a"
    return format(float(x), ".12g")


def _k_range(text: str) -> tuple[int, ...]:
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI with integers, got {text!r}")
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"need 0 <= LO <= HI, got {text!r}")
    return tuple(range(lo, hi + 1))


def _float_set(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals or not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError(f"expected finite comma-separated numbers, got {text!r}")
    return vals


def _band(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    return lo, hi


def _add_params(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--beta", type=float, required=True)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jacobi-envelope", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eval", help="evaluate a quantity at one point")
    _add_params(sp)
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--what", choices=("poly", "ortho", "M", "Z", "W", "S"), default="poly")

    sp = sub.add_parser("window", help="print the envelope, oscillatory and localization windows")
    _add_params(sp)

    sp = sub.add_parser("verify", help="run a parameter sweep and write a JSON report")
    sp.add_argument("--check", choices=("theorem1", "theorem2", "identities", "grmax"), required=True)
    sp.add_argument("--k-range", type=_k_range, required=True)
    sp.add_argument("--alpha-set", type=_float_set, required=True)
    sp.add_argument("--beta-set", type=_float_set, required=True)
    sp.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", type=Path, required=True)
    sp.add_argument("--csv", type=Path, default=None)
    sp.add_argument("--workers", type=int, default=1)

    sp = sub.add_parser("sonin", help="locate the peak of the Sonin function")
    _add_params(sp)

    sp = sub.add_parser("lemmas", help="exact certification at random rational points")
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--corner-bias", type=float, default=0.1)

    sp = sub.add_parser("conjecture", help="plateau ratio and mass on the envelope interval")
    _add_params(sp)
    sp.add_argument("--plateau-band", type=_band, default=None, help="optional LO:HI gate on plateau_ratio")
    sp.add_argument("--min-mass", type=float, default=None, help="optional lower gate on mass")
    return ap


def _params(args) -> JacobiParams:
    return JacobiParams(args.k, args.alpha, args.beta)


def cmd_eval(args) -> int:
    p = _params(args)
    x = args.x
    if args.what == "poly":
        r = eval_jacobi(p, x)
        print(f"value {fmt(r.value)}")
        print(f"derivative {fmt(r.deriv)}")
    elif args.what == "ortho":
        if not -1.0 <= x <= 1.0:
            raise DomainError("x must lie in [-1, 1]")
        v, d = orthonormal_scaled(p, np.asarray(x))
        print(f"value {fmt(v)}")
        print(f"derivative {fmt(d)}")
    elif args.what == "M":
        print(f"value {fmt(eval_M(p, x))}")
    elif args.what == "Z":
        print(f"value {fmt(eval_Z(p, x))}")
    elif args.what == "W":
        w = eval_W(p, x)
        print(f"value {fmt(w.raw)}")
        print(f"weighted {fmt(w.weighted)}")
        print(f"weighted_over_norm {fmt(w.weighted_over_norm)}")
    else:
        print(f"value {fmt(sonin_S(p, x))}")
    return EXIT_OK


def cmd_window(args) -> int:
    p = _params(args)
    dp = derive_params(p)
    iv = delta_interval(dp)
    rows = [("delta_-1", iv.lo), ("delta_1", iv.hi)]
    if p.k >= 1:
        win = osc_window(dp)
        loc = localization_windows(dp)
        rows += [
            ("gamma_-1", win.gamma_minus),
            ("gamma_1", win.gamma_plus),
            ("N_-1", loc.n.lo),
            ("N_1", loc.n.hi),
            ("N'_-1", loc.n_prime.lo),
            ("N'_1", loc.n_prime.hi),
        ]
        x0 = find_x0(dp)
        rows += [("x0", x0.x0), ("theta", x0.theta)]
    else:
        rows += [(name, None) for name in ("gamma_-1", "gamma_1", "N_-1", "N_1", "N'_-1", "N'_1", "x0", "theta")]
    for name, v in rows:
        print(f"{name} {fmt(v)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.samples < 1000:
        raise UsageError("--samples must be at least 1000")
    if args.workers < 1:
        raise UsageError("--workers must be positive")
    grid = GridSpec(
        k_values=args.k_range,
        alpha_values=args.alpha_set,
        beta_values=args.beta_set,
        checks=(args.check,),
        samples=args.samples,
        seed=args.seed,
    )
    report = sweep(grid, workers=args.workers)
    args.out.write_text(report_to_json(report, grid), encoding="utf-8")
    if args.csv is not None:
        args.csv.write_text(report_to_csv(report), encoding="utf-8")
    s = report.summary
    print(
        f"{args.check}: {s['passed']}/{s['total']} passed, {s['skipped']} skipped, "
        f"{s['filtered']} outside domain, min margin {fmt(s['min_margin'])}"
    )
    for it in report.items:
        if not it.passed:
            print(f"FAIL k={it.params.k} alpha={fmt(it.params.alpha)} beta={fmt(it.params.beta)} "
                  f"{it.check} lhs={fmt(it.lhs)} rhs={fmt(it.rhs)} x={fmt(it.witness_x)}")
    if s["empty"]:
        print(f"no grid point satisfies the hypotheses: {DOMAIN_MESSAGES[args.check]}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_sonin(args) -> int:
    p = _params(args)
    if not p.in_theorem1_domain:
        raise DomainError("sonin requires k ≥ 1, α ≥ β ≥ 0")
    dp = derive_params(p)
    res = find_x0(dp)
    item = verify_theorem1(p)
    s0 = sonin_S(p, res.x0)
    for name, v in (("x0", res.x0), ("theta", res.theta), ("S(x0)", s0), ("max|Z|", item.lhs)):
        print(f"{name} {fmt(v)}")
    print(f"bracket [{fmt(res.bracket.lo)}, {fmt(res.bracket.hi)}] ({res.path})")
    return EXIT_OK


def cmd_lemmas(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    if not 0.0 <= args.corner_bias <= 1.0:
        raise UsageError("--corner-bias must lie in [0, 1]")
    s = certify(args.trials, args.seed, args.corner_bias)
    print(f"{s.label}: {s.passed}/{s.trials} rational points passed (seed {s.seed}, corner bias {fmt(s.corner_bias)})")
    print("checked exactly: v_i > 0, u_i < 0, w_i > 0 (i = 0, 1, 2), h > 0, p1 > 0, p2 > 0, 5+q^2+s^2-7q^2s^2 > 0")
    for pt in s.failures[:10]:
        print(f"FAIL qbar={pt.qbar} sbar={pt.sbar}")
    return EXIT_OK if s.ok else EXIT_FAIL


def cmd_conjecture(args) -> int:
    p = _params(args)
    m = conjecture_metrics(p)
    print(f"plateau_ratio {fmt(m.plateau_ratio)}")
    print(f"mass {fmt(m.mass)}")
    ok = m.mass_converged
    if args.plateau_band is not None:
        lo, hi = args.plateau_band
        ok = ok and lo <= m.plateau_ratio <= hi
    if args.min_mass is not None:
        ok = ok and m.mass >= args.min_mass
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "eval": cmd_eval,
    "window": cmd_window,
    "verify": cmd_verify,
    "sonin": cmd_sonin,
    "lemmas": cmd_lemmas,
    "conjecture": cmd_conjecture,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (DomainError, UsageError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
