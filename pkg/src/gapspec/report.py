"""Tabular reports and their CSV / JSON serialization.

A report is a table (one record per constituent or grid point), a block of
state-level scalars, and a ``meta`` block.  Columns carry a unit kind so that
every frequency-like value is written twice: normalized (``omega_perp = 1``)
under its own name and in input units under ``<name>_abs``.

JSON schema::

    {"meta":    {tool, version, command, mode, scale, params_normalized,
                 params_input, a, b, valid_radius, l_max, l_valid},
     "summary": {name: value, ...},
     "records": [{column: value, ...}, ...]}

Energies and residuals are written as decimal strings (``repr`` of the double)
so that they survive any JSON reader unchanged; other floats are JSON numbers.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

FREQ, LENGTH, PLAIN = "freq", "length", "plain"
CSV_FLOAT = "{:.11e}"


@dataclass
class Report:
    command: str
    columns: list  # [(name, kind)]
    rows: list
    summary: dict = field(default_factory=dict)  # name -> (value, kind)
    meta: dict = field(default_factory=dict)


def is_exact_field(name: str) -> bool:
    return "energy" in name or "residual" in name or name.startswith("eps") or name == "E"


def _expand(name, kind, value, scale):
    if kind == FREQ:
        return [(name, value), (name + "_abs", None if value is None else value * scale)]
    if kind == LENGTH:
        return [(name, value), (name + "_abs", None if value is None else value / scale)]
    return [(name, value)]


def _records(report, scale):
    out = []
    for row in report.rows:
        rec = []
        for (name, kind), value in zip(report.columns, row):
            rec.extend(_expand(name, kind, value, scale))
        out.append(rec)
    return out


def _header(report, scale):
    return [k for name, kind in report.columns for k, _ in _expand(name, kind, 0.0, scale)]


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return CSV_FLOAT.format(v)
    return str(v)


def _json_value(name, v):
    if isinstance(v, float):
        if not math.isfinite(v):
            return repr(v)
        return repr(v) if is_exact_field(name) else v
    return v


def emit(report: Report, fmt: str = "csv", scale: float = 1.0) -> bytes:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        summary = [kv for name, (v, kind) in report.summary.items()
                   for kv in _expand(name, kind, v, scale)]
        w.writerow(_header(report, scale) + [k for k, _ in summary])
        for rec in _records(report, scale):
            w.writerow([_csv_cell(v) for _, v in rec] + [_csv_cell(v) for _, v in summary])
        return buf.getvalue().encode("utf-8")
    if fmt == "json":
        summary = {}
        for name, (v, kind) in report.summary.items():
            for k, val in _expand(name, kind, v, scale):
                summary[k] = _json_value(k, val)
        doc = {
            "meta": report.meta,
            "summary": summary,
            "records": [{k: _json_value(k, v) for k, v in rec} for rec in _records(report, scale)],
        }
        return (json.dumps(doc, indent=2, allow_nan=False) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def parse_json(data: bytes) -> dict:
    """Load an emitted JSON document, turning decimal strings back into floats."""
    doc = json.loads(data)

    def conv(d):
        return {k: (float(v) if isinstance(v, str) and is_exact_field(k) else v)
                for k, v in d.items()}

    doc["summary"] = conv(doc["summary"])
    doc["records"] = [conv(r) for r in doc["records"]]
    return doc


__all__ = ["Report", "emit", "parse_json", "is_exact_field", "FREQ", "LENGTH", "PLAIN"]
