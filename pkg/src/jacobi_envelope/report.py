"""JSON and CSV serialization of verification reports.

Floats are written with 17 significant digits so that a report round-trips
exactly; non-finite floats become null. Key order is fixed, which makes the
output byte-identical for identical inputs.
"""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Any

from . import __version__
from .verifier import GridSpec, ReportItem, VerificationReport

CSV_FIELDS = ("k", "alpha", "beta", "check", "lhs", "rhs", "margin", "pass", "witness_x")


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    # keep floats recognizable as floats
    if all(c in "-0123456789" for c in s):
        s += ".0"
    return s


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """json.dumps with fixed 17-digit floats."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(parts) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if not any(isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        parts = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(parts) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def item_to_dict(it: ReportItem) -> dict:
    return {
        "params": {"k": it.params.k, "alpha": it.params.alpha, "beta": it.params.beta},
        "check": it.check,
        "lhs": it.lhs,
        "rhs": it.rhs,
        "margin": it.margin,
        "pass": it.passed,
        "witness_x": it.witness_x,
        "extra": {k: it.extra[k] for k in sorted(it.extra)},
    }


def grid_to_dict(g: GridSpec) -> dict:
    return {
        "k_values": list(g.k_values),
        "alpha_values": [float(a) for a in g.alpha_values],
        "beta_values": [float(b) for b in g.beta_values],
        "checks": list(g.checks),
        "samples": g.samples,
    }


def report_to_json(report: VerificationReport, grid: GridSpec) -> str:
    doc = {
        "tool_version": __version__,
        "seed": grid.seed,
        "grid": grid_to_dict(grid),
        "items": [item_to_dict(it) for it in report.items],
        "summary": report.summary,
    }
    return dumps(doc) + "\n"


def report_to_csv(report: VerificationReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for it in report.items:
        cells = [it.params.k, it.params.alpha, it.params.beta, it.check, it.lhs, it.rhs, it.margin]
        row = [c if isinstance(c, (int, str)) else _fmt_float(c) for c in cells]
        row.append("true" if it.passed else "false")
        row.append("" if it.witness_x is None else _fmt_float(it.witness_x))
        w.writerow(row)
    return buf.getvalue()
