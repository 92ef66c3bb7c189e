"""Parameter files and tabular output."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import fields
from pathlib import Path

import numpy as np

from .model import DriveConfig, SystemParams
from .sweep import COLUMNS, SweepSpec, SweepTable

PARAM_KEYS = tuple(f.name for f in fields(SystemParams))
DRIVE_KEYS = tuple(f.name for f in fields(DriveConfig))


def _as_complex(key, value) -> complex:
    if isinstance(value, bool):
        raise ValueError(f"{key}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict) and set(value) == {"re", "im"}:
        return complex(float(value["re"]), float(value["im"]))
    raise ValueError(f"{key}: expected a number, [re, im] or {{'re', 'im'}}, got {value!r}")


def _as_float(key, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{key}: expected a number, got {value!r}")
    return float(value)


def parse_config(doc: dict) -> tuple[SystemParams, DriveConfig]:
    """Build (params, drive) from a flat mapping; missing keys keep their defaults."""
    if not isinstance(doc, dict):
        raise ValueError("parameter document must be a JSON object")
    unknown = sorted(set(doc) - set(PARAM_KEYS) - set(DRIVE_KEYS))
    if unknown:
        raise ValueError(f"unknown parameter keys: {', '.join(unknown)}")
    p = {k: (_as_complex(k, v) if k in ("g1", "g2") else _as_float(k, v))
         for k, v in doc.items() if k in PARAM_KEYS}
    d = {k: _as_float(k, v) for k, v in doc.items() if k in DRIVE_KEYS}
    return SystemParams(**p), DriveConfig(**d)


def load_config(path) -> tuple[SystemParams, DriveConfig]:
    with open(path) as fh:
        return parse_config(json.load(fh))


def config_document(params: SystemParams, drive: DriveConfig) -> dict:
    doc = params.as_dict()
    for k in ("g1", "g2"):
        doc[k] = doc[k].real if doc[k].imag == 0 else [doc[k].real, doc[k].imag]
    doc.update(drive.as_dict())
    return doc


def table_csv(table: SweepTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in table.rows:
        w.writerow([f"{v:.17g}" for v in row])
    return buf.getvalue()


def parse_table_csv(text: str) -> np.ndarray:
    """Rows of a table CSV; the header must match the fixed schema exactly."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != COLUMNS:
        raise ValueError(f"unexpected CSV header {header}, expected {list(COLUMNS)}")
    rows = [[float(v) for v in r] for r in reader if r]
    return np.array(rows, dtype=float).reshape(-1, len(COLUMNS))


def table_json(table: SweepTable) -> str:
    return json.dumps(table.to_dict(), indent=2) + "\n"


def parse_table_json(text: str) -> SweepTable:
    doc = json.loads(text)
    if doc.get("columns") != list(COLUMNS):
        raise ValueError("unexpected column schema")
    params, _ = parse_config(doc["params"])
    return SweepTable(SweepSpec(**doc["spec"]), params,
                      np.array(doc["rows"], dtype=float).reshape(-1, len(COLUMNS)),
                      list(doc.get("flags", [])))


def records_csv(columns, rows) -> str:
    """Generic CSV for non-sweep outputs (floats at 17 significant digits)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def records_json(columns, rows, **extra) -> str:
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return None
        return v
    doc = {"columns": list(columns), "rows": [[clean(v) for v in r] for r in rows]}
    doc.update(extra)
    return json.dumps(doc, indent=2) + "\n"


def write_text(text: str, path) -> None:
    with open(Path(path), "w", newline="") as fh:
        fh.write(text)
