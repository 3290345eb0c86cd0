"""Table / JSON / CSV rendering of command results.

Numbers are printed with 12 significant digits and anything below 1e-12 in
magnitude prints as 0, so reports diff cleanly between runs.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .states import PureState, format_complex

FORMATS = ("table", "json", "csv")
DIGITS = 12


def clean_float(x: float) -> float:
    x = float(x)
    if abs(x) < 1e-12:
        return 0.0
    return float(f"{x:.{DIGITS}g}")


def amplitudes(state: PureState | None) -> list[str]:
    if state is None:
        return []
    return [format_complex(a, DIGITS) for a in state.amps]


def matrix(m: np.ndarray) -> list[list[str]]:
    return [[format_complex(v, DIGITS) for v in row] for row in np.asarray(m)]


@dataclass
class Report:
    """Rows of flat records plus document-level fields for JSON.

    ``single`` reports hold exactly one row and render as key/value tables
    and flat JSON objects.
    """

    command: str
    columns: list[str]
    rows: list[dict[str, Any]]
    meta: dict[str, Any] = field(default_factory=dict)
    single: bool = False


def _json_value(v):
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, (float, np.floating)):
        return clean_float(v)
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    return str(v)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{clean_float(v):.{DIGITS}g}"
    if isinstance(v, (list, tuple)):
        if v and isinstance(v[0], (list, tuple)):
            return "; ".join(" ".join(_cell(x) for x in row) for row in v)
        return " ".join(_cell(x) for x in v)
    if isinstance(v, dict):
        return " ".join(f"{k}:{_cell(x)}" for k, x in v.items())
    return str(v)


def to_json(report: Report) -> str:
    doc: dict[str, Any] = {"command": report.command}
    doc.update(_json_value(report.meta))
    if report.single:
        doc.update(_json_value(report.rows[0]))
    else:
        doc["columns"] = list(report.columns)
        doc["rows"] = [_json_value({c: r.get(c) for c in report.columns}) for r in report.rows]
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def to_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(report.columns)
    for r in report.rows:
        w.writerow([_cell(r.get(c)) for c in report.columns])
    return buf.getvalue()


def to_table(report: Report) -> str:
    if report.single:
        row = report.rows[0]
        width = max(len(c) for c in report.columns)
        lines = [f"{c.ljust(width)}  {_cell(row.get(c))}".rstrip() for c in report.columns]
        return "\n".join(lines) + "\n"
    cells = [[_cell(r.get(c)) for c in report.columns] for r in report.rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(report.columns)]
    out = ["  ".join(c.ljust(w) for c, w in zip(report.columns, widths)).rstrip()]
    out.append("  ".join("-" * w for w in widths))
    out.extend("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells)
    return "\n".join(out) + "\n"


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    if fmt == "table":
        return to_table(report)
    raise ValueError(f"unknown format {fmt!r}")
