"""Deterministic CSV and JSON output.

Floats are written with 17 significant digits so values round-trip;
complex values are split into real and imaginary columns by the callers.
JSON keys are sorted.  Nothing time- or machine-dependent is written, so
equal configurations give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import PBergmanError


class OutputError(PBergmanError, OSError):
    code = "io"


@dataclass
class Report:
    """Rows of one experiment plus a summary."""

    experiment: str
    columns: list
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    config_hash: str = ""

    def add(self, provenance: str, **values) -> None:
        missing = set(self.columns) - set(values)
        extra = set(values) - set(self.columns)
        if missing or extra:
            raise ValueError(f"row does not match columns (missing {sorted(missing)}, extra {sorted(extra)})")
        self.rows.append({**values, "provenance": provenance})

    @property
    def header(self) -> list:
        return ["experiment", *self.columns, "provenance", "config_hash"]


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(v)


def to_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(report.header)
    for row in report.rows:
        full = {**row, "experiment": report.experiment, "config_hash": report.config_hash}
        w.writerow([format_value(full[c]) for c in report.header])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else format_value(v)
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": _jsonable(v.real), "im": _jsonable(v.imag)}
    return v


def to_json(report: Report) -> str:
    doc = {
        "experiment": report.experiment,
        "config": report.config,
        "config_hash": report.config_hash,
        "rows": len(report.rows),
        "summary": report.summary,
    }
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"


def emit(report: Report, out_dir) -> list[str]:
    """Write ``<experiment>.csv`` and ``<experiment>.json`` into ``out_dir``."""
    paths = []
    try:
        os.makedirs(out_dir, exist_ok=True)
        for ext, text in (("csv", to_csv(report)), ("json", to_json(report))):
            path = os.path.join(out_dir, f"{report.experiment}.{ext}")
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            paths.append(path)
    except OSError as exc:
        raise OutputError(f"cannot write report to {exc.filename or out_dir}: {exc.strerror}") from exc
    return paths
