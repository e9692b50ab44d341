"""Rendering of command results as CSV or JSON."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .precision import MPC, MPFR


def fmt_real(x, digits: int = 15) -> str:
    """Decimal rendering with ``digits`` significant digits; integers stay integers."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return str(x.numerator)
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, MPFR) and digits > 17:
        s = format(x, f".{digits}g")
        return s[:-2] if s.endswith(".0") else s
    return format(float(x), f".{digits}g")


def split_complex(x):
    """(re, im) of an exact, float or MPFR scalar."""
    if isinstance(x, MPC):
        return x.real, x.imag
    if isinstance(x, complex):
        return x.real, x.imag
    return x, Fraction(0) if isinstance(x, (Fraction, int)) else 0.0


def _json_value(v, digits):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, MPFR):
        return fmt_real(v, digits)
    if isinstance(v, dict):
        return {k: _json_value(x, digits) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x, digits) for x in v]
    return v


@dataclass
class Report:
    command: str
    params: dict
    columns: list
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def to_json(self, digits: int = 15) -> str:
        obj = {
            "command": self.command,
            "params": _json_value(self.params, digits),
            "results": [_json_value(dict(zip(self.columns, r)), digits) for r in self.rows],
            "summary": _json_value(self.summary, digits),
        }
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"

    def to_csv(self, digits: int = 15) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_csv_cell(v, digits) for v in r])
        if self.summary:
            buf.write("\n")
            w.writerow(["key", "value"])
            for k, v in self.summary.items():
                w.writerow([k, _csv_cell(v, digits)])
        return buf.getvalue()

    def render(self, fmt: str, digits: int = 15) -> str:
        return self.to_json(digits) if fmt == "json" else self.to_csv(digits)


def _csv_cell(v, digits):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, Fraction) and v.denominator != 1:
        return fmt_real(v, digits)
    if isinstance(v, (list, tuple)):
        return " ".join(_csv_cell(x, digits) for x in v)
    return fmt_real(v, digits)
