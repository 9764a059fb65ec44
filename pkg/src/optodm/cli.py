"""Command-line front end.

Subcommands: budget, gmin, bounds, montecarlo, scan, modes.  Every
subcommand is pure from (config, seed) to files.  Exit codes: 0 success,
2 validation error, 3 physics infeasible, 4 IO error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, InfeasibleError
from .estimator import sensitivity_curve
from .materials import CouplingChannel
from .membrane import FUNDAMENTAL, enumerate_modes, mode_frequency
from .montecarlo import SimulationConfig, recover, synthesize_output
from .noisebudget import (build_grid, compute_budget, detection_bandwidth,
                          imprecision_psd, thermal_psd)
from .runconfig import RunConfig, load_config
from .scanplan import plan_scan, plan_timed_scan
from . import serialize

_DATA_DIR = Path(__file__).parent / "data"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optodm",
        description="Noise budgets, coupling forecasts, synthetic-data "
                    "recovery, and scan plans for a membrane dark-matter "
                    "accelerometer.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="INI run configuration")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--seed", type=int, help="override the montecarlo seed")
        p.add_argument("--channel", choices=[c.value for c in CouplingChannel],
                       help="override the coupling channel")

    p = sub.add_parser("budget", help="noise-budget CSV and summary JSON")
    common(p)

    p = sub.add_parser("gmin", help="sensitivity-curve CSV")
    common(p)
    p.add_argument("--multimode", action="store_true",
                   help="also write the many-mode effective-noise curve")

    p = sub.add_parser("bounds", help="compare a sensitivity curve against "
                                      "published bound curves")
    common(p)
    p.add_argument("--multimode", action="store_true")
    p.add_argument("--sensitivity", help="existing sensitivity CSV "
                                         "(default: compute from config)")
    p.add_argument("--bounds", nargs="+",
                   help="bound-curve CSV files (default: shipped stand-ins)")

    p = sub.add_parser("montecarlo", help="synthesize a record and run recovery")
    common(p)
    p.add_argument("--dump-series", action="store_true",
                   help="also write the raw record as little-endian float64")

    p = sub.add_parser("scan", help="stepped scan plan CSV/JSON")
    common(p)

    p = sub.add_parser("modes", help="membrane mode table CSV")
    common(p)
    return parser


def _outdir(cfg: RunConfig, args) -> Path:
    out = Path(args.out) if args.out else Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    if getattr(args, "channel", None):
        cfg = replace(cfg, channel=CouplingChannel.parse(args.channel))
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, montecarlo=replace(cfg.montecarlo, seed=args.seed))
    return cfg


def _cmd_budget(cfg: RunConfig, out: Path) -> None:
    omega = build_grid(cfg.grid, resonances_rad_s=[
        (mode_frequency(cfg.spec, FUNDAMENTAL), cfg.spec.q0)])
    budget = compute_budget(cfg.spec, cfg.readout, omega=omega)
    width = detection_bandwidth(cfg.spec, cfg.readout)
    omega0 = mode_frequency(cfg.spec, FUNDAMENTAL)
    serialize.write_budget_csv(out / "budget.csv", budget)
    serialize.write_json(out / "budget_summary.json", {
        "schema_version": serialize.SCHEMA_VERSION,
        "kind": "budget_summary",
        "f11_hz": omega0 / (2.0 * math.pi),
        "sqrt_sxx_imp_m_rthz": math.sqrt(imprecision_psd(cfg.readout)),
        "sqrt_saa_th_resonance_ms2_rthz": math.sqrt(
            thermal_psd(cfg.spec, omega0)),
        "detection_bandwidth_rad_s": width,
        "detection_bandwidth_hz": width / (2.0 * math.pi),
    })


def _gmin_points(cfg: RunConfig, multimode: bool):
    omega0 = mode_frequency(cfg.spec, FUNDAMENTAL)
    modes = None
    resonances = [(omega0, cfg.spec.q0)]
    if multimode:
        modes = enumerate_modes(cfg.spec, cfg.mode_f_max_hz, cfg.max_modes)
        resonances = [(m.omega_rad_s, cfg.spec.q0)
                      for m in modes if m.beta != 0.0]
    omega = build_grid(cfg.grid, resonances_rad_s=resonances)
    return sensitivity_curve(cfg.spec, cfg.readout, omega, cfg.dm, cfg.f12,
                             tau_s=cfg.tau_s, modes=modes)


def _cmd_gmin(cfg: RunConfig, out: Path, multimode: bool) -> None:
    serialize.write_sensitivity_csv(out / "sensitivity.csv",
                                    _gmin_points(cfg, multimode=False))
    if multimode:
        serialize.write_sensitivity_csv(out / "sensitivity_multimode.csv",
                                        _gmin_points(cfg, multimode=True))


def _default_bounds(channel: CouplingChannel) -> list[Path]:
    tag = "b" if channel is CouplingChannel.B else "bl"
    return sorted(_DATA_DIR.glob(f"bound_*_{tag}.csv"))


def _cmd_bounds(cfg: RunConfig, out: Path, args) -> None:
    if args.sensitivity:
        points = serialize.read_sensitivity_csv(args.sensitivity)
    else:
        points = _gmin_points(cfg, multimode=args.multimode)
    paths = ([Path(p) for p in args.bounds] if args.bounds
             else _default_bounds(cfg.channel))
    if not paths:
        raise ConfigError("no bound curves given and none shipped for "
                          f"channel {cfg.channel.value}")
    curves = [serialize.read_bound_csv(p) for p in paths]
    report = serialize.compare_bounds(points, curves)
    serialize.write_json(out / "bounds_report.json", report)


def _cmd_montecarlo(cfg: RunConfig, out: Path, dump_series: bool) -> None:
    mc = cfg.montecarlo
    if mc.duration_s is None or mc.sample_rate_hz is None:
        raise ConfigError("[montecarlo] duration_s and sample_rate_hz are "
                          "required for the montecarlo subcommand")
    band = None
    if mc.search_f_lo_hz is not None or mc.search_f_hi_hz is not None:
        if mc.search_f_lo_hz is None or mc.search_f_hi_hz is None:
            raise ConfigError("[montecarlo] give both search_f_lo_hz and "
                              "search_f_hi_hz or neither")
        band = (mc.search_f_lo_hz, mc.search_f_hi_hz)
    try:
        sim = SimulationConfig(
            spec=cfg.spec, readout=cfg.readout, dm=cfg.dm, f12=cfg.f12,
            injected_g=mc.injected_g, duration_s=mc.duration_s,
            sample_rate_hz=mc.sample_rate_hz, seed=mc.seed, modes=mc.modes,
            segment_duration_s=mc.segment_s, snr_threshold=mc.snr_threshold,
            search_band_hz=band, window_bins=mc.window_bins,
            floor_mode=mc.floor_mode, with_thermal=mc.with_thermal,
            with_backaction=mc.with_backaction,
            with_imprecision=mc.with_imprecision)
    except ValueError as exc:
        raise ConfigError(f"[montecarlo] {exc}") from exc
    series = synthesize_output(sim)
    result = recover(sim, series)
    serialize.write_json(out / "montecarlo.json",
                         serialize.montecarlo_manifest(cfg.echo, sim, result))
    if dump_series:
        serialize.write_series(out / "series.bin", series, sim)


def _cmd_scan(cfg: RunConfig, out: Path) -> None:
    sc = cfg.scan
    if sc.mode == "timed":
        for key in ("f_start_hz", "dwell_s", "step_hz", "budget_s"):
            if getattr(sc, key) is None:
                raise ConfigError(f"[scan] {key} required for timed mode")
        plan = plan_timed_scan(2 * math.pi * sc.f_start_hz,
                               2 * math.pi * sc.step_hz,
                               sc.dwell_s, sc.budget_s)
    else:
        start = (2 * math.pi * sc.f_start_hz if sc.f_start_hz is not None
                 else mode_frequency(cfg.spec, FUNDAMENTAL))
        if sc.f_end_hz is None:
            raise ConfigError("[scan] f_end_hz required for band mode")
        plan = plan_scan(cfg.spec, cfg.readout, cfg.dm.q_dm, start,
                         2 * math.pi * sc.f_end_hz, sc.tuning_limit)
    serialize.write_scan_csv(out / "scan.csv", plan)
    serialize.write_json(out / "scan_plan.json", {
        "schema_version": serialize.SCHEMA_VERSION,
        "kind": "scan_plan",
        "f_start_hz": plan.omega_start_rad_s / (2 * math.pi),
        "f_end_hz": plan.omega_end_rad_s / (2 * math.pi),
        "n_steps": plan.n_steps,
        "total_time_s": plan.total_time_s,
        "fractional_coverage": plan.fractional_coverage,
        "truncated": plan.truncated,
        "steps": [{"index": s.index,
                   "f_center_hz": s.omega_center_rad_s / (2 * math.pi),
                   "bandwidth_hz": s.width_rad_s / (2 * math.pi),
                   "dwell_s": s.dwell_s,
                   "cumulative_s": s.cumulative_s} for s in plan.steps],
    })


def _cmd_modes(cfg: RunConfig, out: Path) -> None:
    modes = enumerate_modes(cfg.spec, cfg.mode_f_max_hz, cfg.max_modes)
    serialize.write_modes_csv(out / "modes.csv", modes)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _apply_overrides(load_config(args.config), args)
        out = _outdir(cfg, args)
        if args.command == "budget":
            _cmd_budget(cfg, out)
        elif args.command == "gmin":
            _cmd_gmin(cfg, out, args.multimode)
        elif args.command == "bounds":
            _cmd_bounds(cfg, out, args)
        elif args.command == "montecarlo":
            _cmd_montecarlo(cfg, out, args.dump_series)
        elif args.command == "scan":
            _cmd_scan(cfg, out)
        elif args.command == "modes":
            _cmd_modes(cfg, out)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
