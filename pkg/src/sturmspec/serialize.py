"""Deterministic JSON and CSV emission.

Data files must be byte-identical across runs for identical inputs, so keys
are sorted, floats use their shortest round-trip representation, and run
metadata (timestamps, versions) goes to a sidecar file instead of the data
file itself.
"""

from __future__ import annotations

import dataclasses
import json
import math
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import InputError


def to_jsonable(obj):
    """Recursively convert dataclasses/numpy values to plain JSON types."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: to_jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return None if math.isnan(v) else v
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    return obj


def dump_json(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


def emit_plot_data(series, path) -> None:
    """Write labeled (x, y) sequences as CSV rows ``label,x,y``.

    ``series`` is an iterable of (label, xs, ys) triples; each pair of
    sequences must have equal length and finite values.  An empty series
    list produces a header-only file.
    """
    lines = ["label,x,y"]
    for label, xs, ys in series:
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.shape != ys.shape or xs.ndim != 1:
            raise InputError(f"series {label!r}: x and y must be equal-length 1-d sequences")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise InputError(f"series {label!r}: values must be finite")
        for x, y in zip(xs, ys):
            lines.append(f"{label},{x!r},{y!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_csv(path, header: str, rows) -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_with_sidecar(path, text: str, meta: dict) -> None:
    """Write a data file plus a ``<path>.meta.json`` sidecar with run info."""
    path = Path(path)
    path.write_text(text)
    sidecar = path.with_name(path.name + ".meta.json")
    payload = dict(meta)
    payload["generated_at"] = datetime.now(timezone.utc).isoformat()
    sidecar.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
