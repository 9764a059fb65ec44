"""Readers for the exported table formats.

Every CSV ships with a JSON sidecar (same stem, .json) declaring
schema_version, kind, and column order.  Readers refuse anything whose
version or kind does not match instead of guessing; render-time failures
should name the file and the mismatch.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

SUPPORTED_SCHEMA = 1


class SchemaError(ValueError):
    """Input file does not match a supported schema."""


def _load_sidecar(csv_path: Path, kind: str) -> dict:
    sidecar = csv_path.with_suffix(".json")
    if not sidecar.exists():
        raise SchemaError(f"{csv_path}: missing sidecar {sidecar.name}")
    with open(sidecar, encoding="utf-8") as fh:
        meta = json.load(fh)
    version = meta.get("schema_version")
    if version != SUPPORTED_SCHEMA:
        raise SchemaError(f"{csv_path}: schema version {version!r}, "
                          f"this renderer supports {SUPPORTED_SCHEMA}")
    if meta.get("kind") != kind:
        raise SchemaError(f"{csv_path}: kind {meta.get('kind')!r}, "
                          f"expected {kind!r}")
    return meta


def read_table(path, kind: str) -> tuple[dict, dict]:
    """Load a sidecar-described CSV as {column: array-or-list}, plus the
    sidecar metadata.  Columns that parse as float become numpy arrays;
    anything else stays a list of strings.
    """
    path = Path(path)
    meta = _load_sidecar(path, kind)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != meta.get("columns"):
            raise SchemaError(f"{path}: header {header} does not match "
                              f"sidecar columns {meta.get('columns')}")
        rows = [row for row in reader if row]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    if any(len(row) != len(header) for row in rows):
        raise SchemaError(f"{path}: ragged rows")
    columns: dict = {}
    for k, name in enumerate(header):
        raw = [row[k] for row in rows]
        try:
            columns[name] = np.array([float(v) for v in raw])
        except ValueError:
            columns[name] = raw
    return columns, meta


def read_bound(path) -> dict:
    """Published-bound curve: '#' comments may carry 'label:' and
    'approximate:' markers, then a header f_hz,g_bound and rows."""
    path = Path(path)
    label = path.stem
    approximate = False
    f_vals: list[float] = []
    g_vals: list[float] = []
    header_seen = False
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                note = line.lstrip("#").strip()
                low = note.lower()
                if low.startswith("label:"):
                    label = note.split(":", 1)[1].strip()
                if low.startswith("approximate:"):
                    approximate = note.split(":", 1)[1].strip().lower() in (
                        "1", "true", "yes")
                continue
            parts = [p.strip() for p in line.split(",")]
            if not header_seen:
                if parts[:2] != ["f_hz", "g_bound"]:
                    raise SchemaError(f"{path}: expected header f_hz,g_bound")
                header_seen = True
                continue
            if len(parts) != 2:
                raise SchemaError(f"{path}: bad row {line!r}")
            f_vals.append(float(parts[0]))
            g_vals.append(float(parts[1]))
    if not header_seen or not f_vals:
        raise SchemaError(f"{path}: no bound data")
    return {"label": label, "approximate": approximate,
            "f_hz": np.asarray(f_vals), "g_bound": np.asarray(g_vals)}
