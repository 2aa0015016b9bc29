"""Report rows and their CSV/JSON serialization.

Floats are written with 17 significant digits so that parsing a report
reproduces every value bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Optional, Sequence


@dataclass(frozen=True)
class ReportRow:
    alpha: float
    variant: str
    n: int
    x: float
    c: float
    b: float
    r1: float
    r2: float
    r3: float
    method: str
    target: str
    value: float
    stderr: float
    ci_lo: float
    ci_hi: float
    samples: int
    seed: int
    wall_time: float


COLUMNS = tuple(f.name for f in fields(ReportRow))
FORMATS = ("csv", "json")


def format_float(v: float) -> str:
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def _cell(v) -> str:
    if isinstance(v, float):
        return format_float(v)
    return str(v)


def _json_value(v) -> str:
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, float):
        # JSON has no NaN/inf
        return format_float(v) if math.isfinite(v) else "null"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def to_csv(rows: Sequence[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        w.writerow([_cell(v) for v in astuple(row)])
    return buf.getvalue()


def to_json(rows: Sequence[ReportRow], metadata: Optional[dict] = None) -> str:
    lines = ["{", f'  "metadata": {_json_value(metadata or {})},', '  "rows": [']
    body = []
    for row in rows:
        body.append("    {" + ", ".join(f'"{k}": {_json_value(v)}' for k, v in zip(COLUMNS, astuple(row))) + "}")
    lines.append(",\n".join(body))
    lines += ["  ]", "}"]
    return "\n".join(lines) + "\n"


def emit(rows: Sequence[ReportRow], format: str = "csv", metadata: Optional[dict] = None) -> str:
    """Serialize rows; ``metadata`` is only written by the JSON format."""
    if not rows:
        raise ValueError("no rows to emit")
    if format == "csv":
        return to_csv(rows)
    if format == "json":
        return to_json(rows, metadata)
    raise ValueError(f"unknown report format {format!r}; expected one of {FORMATS}")


def write(text: str, path) -> None:
    path = Path(path)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc


_CONVERT = {"float": float, "int": int, "str": str}


def _row(rec: dict) -> ReportRow:
    return ReportRow(**{f.name: _CONVERT[f.type](rec[f.name]) for f in fields(ReportRow)})


def parse_csv(text: str) -> list[ReportRow]:
    """Read rows back from :func:`to_csv` output."""
    return [_row(rec) for rec in csv.DictReader(io.StringIO(text))]


def parse_json(text: str) -> tuple[dict, list[ReportRow]]:
    doc = json.loads(text)
    return doc["metadata"], [_row(rec) for rec in doc["rows"]]
