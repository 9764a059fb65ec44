"""File interfaces: CSV/JSON writers, binary series dump, bound-curve reader.

Every CSV gets a header row with unit-suffixed column names and a JSON
sidecar carrying schema_version, so downstream consumers (the plotting
component in particular) can validate without guessing.  Floats are
written with repr (shortest round-trip form), which makes outputs
byte-stable for identical inputs.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .estimator import Regime, SensitivityPoint
from .membrane import ModeData
from .montecarlo import RecoveryResult, SimulationConfig
from .noisebudget import NoiseBudget
from .scanplan import ScanPlan

SCHEMA_VERSION = 1

BUDGET_COLUMNS = ("omega_rad_s", "f_hz", "sxx_imp", "sxx_th", "sxx_ba",
                  "sxx_tot", "saa_det", "saa_sql")
SENSITIVITY_COLUMNS = ("f_hz", "mass_ev", "g_min", "regime", "mode_count")
MODES_COLUMNS = ("i", "j", "f_hz", "beta", "m_kg")
SCAN_COLUMNS = ("step", "f_center_hz", "bandwidth_hz", "dwell_s", "cumulative_s")


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _write_csv(path: Path, columns, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_sidecar(csv_path: Path, kind: str, columns, extra=None) -> None:
    meta = {"schema_version": SCHEMA_VERSION, "kind": kind,
            "columns": list(columns)}
    if extra:
        meta.update(extra)
    write_json(csv_path.with_suffix(".json"), meta)


def write_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_budget_csv(path, budget: NoiseBudget) -> Path:
    path = Path(path)
    rows = zip(budget.omega_rad_s, budget.f_hz, budget.sxx_imp, budget.sxx_th,
               budget.sxx_ba, budget.sxx_tot, budget.saa_det, budget.saa_sql)
    _write_csv(path, BUDGET_COLUMNS, rows)
    _write_sidecar(path, "budget", BUDGET_COLUMNS)
    return path


def write_sensitivity_csv(path, points: list[SensitivityPoint]) -> Path:
    path = Path(path)
    rows = ((p.f_hz, p.mass_ev, p.g_min, p.regime.value, p.mode_count)
            for p in points)
    _write_csv(path, SENSITIVITY_COLUMNS, rows)
    _write_sidecar(path, "sensitivity", SENSITIVITY_COLUMNS)
    return path


def write_modes_csv(path, modes: list[ModeData]) -> Path:
    path = Path(path)
    rows = ((m.index.i, m.index.j, m.omega_rad_s / (2.0 * math.pi), m.beta,
             m.mass_kg) for m in modes)
    _write_csv(path, MODES_COLUMNS, rows)
    _write_sidecar(path, "modes", MODES_COLUMNS)
    return path


def write_scan_csv(path, plan: ScanPlan) -> Path:
    path = Path(path)
    rows = ((s.index, s.omega_center_rad_s / (2.0 * math.pi),
             s.width_rad_s / (2.0 * math.pi), s.dwell_s, s.cumulative_s)
            for s in plan.steps)
    _write_csv(path, SCAN_COLUMNS, rows)
    _write_sidecar(path, "scan", SCAN_COLUMNS, extra={
        "f_start_hz": plan.omega_start_rad_s / (2.0 * math.pi),
        "f_end_hz": plan.omega_end_rad_s / (2.0 * math.pi),
        "total_time_s": plan.total_time_s,
        "n_steps": plan.n_steps,
        "fractional_coverage": plan.fractional_coverage,
        "truncated": plan.truncated,
    })
    return path


def write_series(path, series: np.ndarray, cfg: SimulationConfig) -> Path:
    """Raw record as little-endian float64 plus a JSON sidecar."""
    path = Path(path)
    np.asarray(series, dtype="<f8").tofile(path)
    write_json(path.with_suffix(".json"), {
        "schema_version": SCHEMA_VERSION,
        "kind": "series",
        "dtype": "<f8",
        "n_samples": int(len(series)),
        "sample_rate_hz": cfg.sample_rate_hz,
        "duration_s": len(series) / cfg.sample_rate_hz,
        "seed": cfg.seed,
    })
    return path


def montecarlo_manifest(echo: dict, cfg: SimulationConfig,
                        result: RecoveryResult) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "montecarlo",
        "config": echo,
        "seed": cfg.seed,
        "injected_g": cfg.injected_g,
        "sample_rate_hz": cfg.sample_rate_hz,
        "duration_s": cfg.duration_s,
        "segment_duration_s": cfg.segment_s,
        "modes": [[m.i, m.j] for m in cfg.modes],
        "result": result.to_dict(),
    }


def read_sensitivity_csv(path) -> list[SensitivityPoint]:
    """Read back a sensitivity CSV written by write_sensitivity_csv."""
    points = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != SENSITIVITY_COLUMNS:
            raise ConfigError(f"{path}: expected columns "
                              f"{','.join(SENSITIVITY_COLUMNS)}")
        for row in reader:
            f_hz, _mass, g, regime, count = row
            points.append(SensitivityPoint(
                omega_rad_s=2.0 * math.pi * float(f_hz),
                g_min=float(g),
                regime=Regime(regime),
                mode_count=int(count)))
    if not points:
        raise ConfigError(f"{path}: no rows")
    return points


@dataclass(frozen=True)
class BoundCurve:
    """A published (or stand-in) exclusion curve g(f) to compare against."""

    label: str
    f_hz: np.ndarray
    g_bound: np.ndarray
    approximate: bool = False

    def __post_init__(self):
        if len(self.f_hz) != len(self.g_bound) or len(self.f_hz) == 0:
            raise ValueError(f"{self.label}: malformed bound curve")
        if np.any(np.diff(self.f_hz) <= 0):
            raise ValueError(f"{self.label}: frequencies must increase")
        if np.any(self.g_bound <= 0):
            raise ValueError(f"{self.label}: bounds must be positive")


def read_bound_csv(path) -> BoundCurve:
    """Bound file: '#' comment lines (label: / approximate: markers honored),
    then a header f_hz,g_bound and rows."""
    path = Path(path)
    label = path.stem
    approximate = False
    f_vals: list[float] = []
    g_vals: list[float] = []
    with open(path, encoding="utf-8") as fh:
        header_seen = False
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                note = line.lstrip("#").strip()
                if note.lower().startswith("label:"):
                    label = note.split(":", 1)[1].strip()
                if note.lower().startswith("approximate:"):
                    approximate = note.split(":", 1)[1].strip().lower() in (
                        "1", "true", "yes")
                continue
            parts = [p.strip() for p in line.split(",")]
            if not header_seen:
                if parts[:2] != ["f_hz", "g_bound"]:
                    raise ConfigError(f"{path}: expected header f_hz,g_bound, "
                                      f"got {line!r}")
                header_seen = True
                continue
            if len(parts) != 2:
                raise ConfigError(f"{path}: bad row {line!r}")
            f_vals.append(float(parts[0]))
            g_vals.append(float(parts[1]))
    if not header_seen or not f_vals:
        raise ConfigError(f"{path}: no bound data found")
    return BoundCurve(label=label, f_hz=np.asarray(f_vals),
                      g_bound=np.asarray(g_vals), approximate=approximate)


def compare_bounds(points: list[SensitivityPoint],
                   bounds: list[BoundCurve]) -> dict:
    """Ratio bound/g_min over each overlap; the band where the forecast
    beats the bound (ratio > 1) and the best ratio reached."""
    f_curve = np.array([p.f_hz for p in points])
    g_curve = np.array([p.g_min for p in points])
    order = np.argsort(f_curve)
    f_curve = f_curve[order]
    g_curve = g_curve[order]
    report = {"schema_version": SCHEMA_VERSION, "kind": "bounds",
              "comparisons": []}
    for bound in bounds:
        lo = max(f_curve[0], bound.f_hz[0])
        hi = min(f_curve[-1], bound.f_hz[-1])
        entry = {"label": bound.label, "approximate": bound.approximate,
                 "overlap_f_lo_hz": None, "overlap_f_hi_hz": None,
                 "max_ratio": None, "exceeds": False,
                 "exceed_f_lo_hz": None, "exceed_f_hi_hz": None}
        if lo < hi:
            sel = (f_curve >= lo) & (f_curve <= hi)
            f_sel = f_curve[sel]
            g_sel = g_curve[sel]
            b_sel = np.interp(f_sel, bound.f_hz, bound.g_bound)
            ratio = b_sel / g_sel
            k = int(np.argmax(ratio))
            entry.update(overlap_f_lo_hz=float(lo), overlap_f_hi_hz=float(hi),
                         max_ratio=float(ratio[k]),
                         max_ratio_f_hz=float(f_sel[k]),
                         exceeds=bool(ratio[k] > 1.0))
            if entry["exceeds"]:
                above = f_sel[ratio > 1.0]
                entry.update(exceed_f_lo_hz=float(above[0]),
                             exceed_f_hi_hz=float(above[-1]))
        report["comparisons"].append(entry)
    return report
