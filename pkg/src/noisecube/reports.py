"""Machine-readable run reports: JSON and CSV emission with stable field order.

Case records are plain dicts. Floats are written with 17 significant digits,
non-finite floats as the strings "inf", "-inf", "nan", and integers beyond
2^53 as decimal strings so no reader loses precision.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

_SAFE_INT = 1 << 53


def to_value(obj: Any) -> Any:
    """Normalize a value into the JSON-safe record vocabulary."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        v = int(obj)
        return str(v) if abs(v) >= _SAFE_INT else v
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if obj is None or isinstance(obj, str):
        return obj
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return to_record(obj)
    if isinstance(obj, dict):
        return {str(k): to_value(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_value(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_record(case: Any) -> dict:
    """Dataclass or mapping -> ordered record; ``passed`` is exported as ``pass``."""
    items = dataclasses.asdict(case).items() if dataclasses.is_dataclass(case) else case.items()
    rec = {}
    for key, value in items:
        rec["pass" if key == "passed" else key] = to_value(value)
    return rec


def _margin(rec: dict) -> float | None:
    m = rec.get("margin")
    if isinstance(m, (int, float)) and not isinstance(m, bool):
        return float(m)
    return None


@dataclass
class Report:
    command: str
    params: dict = field(default_factory=dict)
    cases: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.params = to_value(self.params)
        self.cases = [to_record(c) for c in self.cases]

    def add(self, case) -> None:
        self.cases.append(to_record(case))

    def extend(self, cases: Iterable) -> None:
        for c in cases:
            self.add(c)

    @property
    def failures(self) -> int:
        return sum(1 for c in self.cases if c.get("pass") is False)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    @property
    def summary(self) -> dict:
        margins = [m for m in map(_margin, self.cases) if m is not None]
        worst = max(0.0, -min(margins)) if margins else 0.0
        return {"total": len(self.cases), "failures": self.failures, "max_violation": worst}

    def as_dict(self) -> dict:
        return {"command": self.command, "params": self.params, "cases": self.cases,
                "summary": self.summary, "metadata": self.metadata}

    @classmethod
    def from_json(cls, text: str) -> "Report":
        data = json.loads(text)
        rep = cls(data["command"], data.get("params", {}), [], data.get("metadata", {}))
        rep.cases = list(data.get("cases", []))
        return rep

    def same_content(self, other: "Report") -> bool:
        """Equality ignoring the metadata block (timestamps, runtime)."""
        return (self.command, self.params, self.cases) == (other.command, other.params, other.cases)


def _dump(obj: Any, out: list) -> None:
    if isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        text = format(obj, ".17g")
        if not any(ch in text for ch in ".en"):
            text += ".0"
        out.append(text)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k)) + ":")
            _dump(v, out)
        out.append("}")
    elif isinstance(obj, list):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _dump(v, out)
        out.append("]")
    else:
        _dump(to_value(obj), out)


def _csv_cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, (dict, list)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def emit_csv(rows: list[dict], columns: Iterable[str] | None = None) -> str:
    """Header plus one line per row; columns default to first-seen key order."""
    if columns is None:
        columns = []
        for row in rows:
            for key in row:
                if key not in columns:
                    columns.append(key)
    columns = list(columns)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def emit(report: Report, fmt: str = "json", columns: Iterable[str] | None = None) -> bytes:
    """Serialize a report; CSV carries one case per row (optionally only ``columns``)."""
    if fmt == "json":
        out: list[str] = []
        _dump(report.as_dict(), out)
        return ("".join(out) + "\n").encode("utf-8")
    if fmt == "csv":
        return emit_csv(report.cases, columns).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}; expected json or csv")
