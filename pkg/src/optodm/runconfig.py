"""INI run-configuration parsing with strict key checking.

Keys carry their unit in the name (side_cm, power_mw, temperature_mk, ...)
so a config file reads unambiguously.  Unknown sections or keys are
rejected rather than ignored; a typo should never silently fall back to a
default.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field

from .errors import ConfigError
from .materials import (BERYLLIUM, ISOTOPES, SILICON_NITRIDE, Composition,
                        CouplingChannel, load_isotope_table, suppression_factor)
from .dmfield import DmModel
from .membrane import FUNDAMENTAL, MembraneSpec, ModeIndex, mode_frequency
from .noisebudget import FrequencyGrid, OpticalReadout

_KNOWN_KEYS = {
    "materials": {"test_material", "reference_material", "channel",
                  "isotope_table"},
    "membrane": {"side_cm", "thickness_nm", "density_kg_m3", "stress_gpa",
                 "q0", "temperature_mk"},
    "readout": {"finesse", "power_mw", "wavelength_nm", "efficiency"},
    "dm": {"mass_ev", "frequency_hz", "q_dm", "rho_dm_gev_cm3", "v_vir_c"},
    "grid": {"f_min_hz", "f_max_hz", "points_per_decade", "refine",
             "mode_f_max_hz", "max_modes"},
    "estimator": {"tau_s"},
    "scan": {"mode", "f_start_hz", "f_end_hz", "tuning_limit", "dwell_s",
             "step_hz", "budget_s"},
    "montecarlo": {"injected_g", "duration_s", "sample_rate_hz", "seed",
                   "segment_s", "snr_threshold", "window_bins", "floor_mode",
                   "search_f_lo_hz", "search_f_hi_hz", "modes",
                   "with_thermal", "with_backaction", "with_imprecision"},
    "output": {"directory"},
}


@dataclass(frozen=True)
class ScanSettings:
    mode: str = "band"            # "band" or "timed"
    f_start_hz: float | None = None
    f_end_hz: float | None = None
    tuning_limit: float = 0.10
    dwell_s: float | None = None
    step_hz: float | None = None
    budget_s: float | None = None


@dataclass(frozen=True)
class MonteCarloSettings:
    injected_g: float = 0.0
    duration_s: float | None = None
    sample_rate_hz: float | None = None
    seed: int = 0
    segment_s: float | None = None
    snr_threshold: float = 1.0
    window_bins: int = 8
    floor_mode: str = "modeled"
    search_f_lo_hz: float | None = None
    search_f_hi_hz: float | None = None
    modes: tuple[ModeIndex, ...] = (FUNDAMENTAL,)
    with_thermal: bool = True
    with_backaction: bool = True
    with_imprecision: bool = True


@dataclass(frozen=True)
class RunConfig:
    """Validated run settings for every CLI subcommand."""

    spec: MembraneSpec
    readout: OpticalReadout
    dm: DmModel
    test_material: Composition
    reference_material: Composition
    channel: CouplingChannel
    grid: FrequencyGrid
    mode_f_max_hz: float
    max_modes: int
    tau_s: float | None
    scan: ScanSettings
    montecarlo: MonteCarloSettings
    output_dir: str
    echo: dict = field(default_factory=dict, compare=False)

    @property
    def f12(self) -> float:
        return suppression_factor(self.test_material, self.reference_material,
                                  self.channel)


class _Section:
    """Typed accessors over one config section with error context."""

    def __init__(self, name: str, data: dict[str, str]):
        self.name = name
        self.data = data

    def _convert(self, key: str, caster, default):
        if key not in self.data:
            return default
        raw = self.data[key]
        try:
            return caster(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"[{self.name}] {key} = {raw!r}: {exc}") from exc

    def get_float(self, key, default=None):
        return self._convert(key, float, default)

    def get_int(self, key, default=None):
        return self._convert(key, lambda s: int(float(s)), default)

    def get_str(self, key, default=None):
        return self._convert(key, str, default)

    def get_bool(self, key, default=None):
        def to_bool(s):
            low = s.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {s!r}")
        return self._convert(key, to_bool, default)


def _parse_modes(raw: str) -> tuple[ModeIndex, ...]:
    modes = []
    for part in raw.replace(";", " ").split():
        bits = part.split(",")
        if len(bits) != 2:
            raise ValueError(f"mode {part!r} is not i,j")
        modes.append(ModeIndex(int(bits[0]), int(bits[1])))
    if not modes:
        raise ValueError("empty mode list")
    return tuple(modes)


def load_config(path) -> RunConfig:
    """Parse and validate an INI run configuration."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keep case: material names appear in keys
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError:
        raise
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    echo: dict[str, dict[str, str]] = {}
    sections: dict[str, _Section] = {}
    for name in parser.sections():
        if name not in _KNOWN_KEYS:
            raise ConfigError(f"{path}: unknown section [{name}]; "
                              f"known: {sorted(_KNOWN_KEYS)}")
        data = dict(parser.items(name))
        for key in data:
            if key not in _KNOWN_KEYS[name] and not (
                    name == "materials" and key.startswith("material.")):
                raise ConfigError(f"{path}: unknown key {key!r} in [{name}]")
        sections[name] = _Section(name, data)
        echo[name] = dict(data)

    def sec(name: str) -> _Section:
        return sections.get(name, _Section(name, {}))

    # materials
    mats = sec("materials")
    table = dict(ISOTOPES)
    iso_path = mats.get_str("isotope_table")
    if iso_path is not None:
        try:
            table.update(load_isotope_table(iso_path))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    compositions = {"Si3N4": SILICON_NITRIDE, "Be": BERYLLIUM}
    for key, raw in mats.data.items():
        if not key.startswith("material."):
            continue
        name = key.split(".", 1)[1]
        pairs = []
        try:
            for part in raw.replace(";", " ").split():
                sym, count = part.split(":")
                if sym not in table:
                    raise ValueError(f"unknown isotope {sym!r}")
                pairs.append((table[sym], float(count)))
            compositions[name] = Composition(name, tuple(pairs))
        except ValueError as exc:
            raise ConfigError(f"[materials] {key}: {exc}") from exc

    def composition(key: str, default_name: str) -> Composition:
        name = mats.get_str(key, default_name)
        if name not in compositions:
            raise ConfigError(f"[materials] {key} = {name!r} is not a known "
                              f"composition; have {sorted(compositions)}")
        return compositions[name]

    test_mat = composition("test_material", "Si3N4")
    ref_mat = composition("reference_material", "Be")
    try:
        channel = CouplingChannel.parse(mats.get_str("channel", "b-minus-l"))
    except ValueError as exc:
        raise ConfigError(f"[materials] {exc}") from exc

    # membrane
    mem = sec("membrane")
    try:
        spec = MembraneSpec(
            side_m=mem.get_float("side_cm", 10.0) * 1e-2,
            thickness_m=mem.get_float("thickness_nm", 200.0) * 1e-9,
            density_kg_m3=mem.get_float("density_kg_m3", 3100.0),
            stress_pa=mem.get_float("stress_gpa", 1.0) * 1e9,
            q0=mem.get_float("q0", 1e9),
            temperature_k=mem.get_float("temperature_mk", 10.0) * 1e-3,
        )
    except ValueError as exc:
        raise ConfigError(f"[membrane] {exc}") from exc

    # readout
    ro = sec("readout")
    try:
        readout = OpticalReadout(
            finesse=ro.get_float("finesse", 100.0),
            power_w=ro.get_float("power_mw", 0.3) * 1e-3,
            wavelength_m=ro.get_float("wavelength_nm", 1000.0) * 1e-9,
            efficiency=ro.get_float("efficiency", 1.0),
        )
    except ValueError as exc:
        raise ConfigError(f"[readout] {exc}") from exc

    # dm
    dmsec = sec("dm")
    mass_ev = dmsec.get_float("mass_ev")
    freq_hz = dmsec.get_float("frequency_hz")
    if mass_ev is not None and freq_hz is not None:
        raise ConfigError("[dm] give mass_ev or frequency_hz, not both")
    try:
        kwargs = dict(
            q_dm=dmsec.get_float("q_dm", 5e5),
            rho_dm_gev_cm3=dmsec.get_float("rho_dm_gev_cm3", 0.4),
            v_vir=dmsec.get_float("v_vir_c", 1e-3),
        )
        if mass_ev is not None:
            dm = DmModel(mass_ev=mass_ev, **kwargs)
        else:
            omega = (2.0 * math.pi * freq_hz if freq_hz is not None
                     else mode_frequency(spec, FUNDAMENTAL))
            dm = DmModel.from_frequency(omega, **kwargs)
    except ValueError as exc:
        raise ConfigError(f"[dm] {exc}") from exc

    # grid
    gr = sec("grid")
    try:
        f11 = mode_frequency(spec, FUNDAMENTAL) / (2.0 * math.pi)
        grid = FrequencyGrid(
            f_min_hz=gr.get_float("f_min_hz", f11 / 4.0),
            f_max_hz=gr.get_float("f_max_hz", f11 * 4.0),
            points_per_decade=gr.get_int("points_per_decade", 300),
            refine=gr.get_bool("refine", True),
        )
    except ValueError as exc:
        raise ConfigError(f"[grid] {exc}") from exc
    mode_f_max_hz = gr.get_float("mode_f_max_hz", 30e3)
    max_modes = gr.get_int("max_modes", 2000)

    # estimator
    est = sec("estimator")
    tau_s = est.get_float("tau_s")
    if tau_s is not None and tau_s <= 0:
        raise ConfigError(f"[estimator] tau_s must be > 0, got {tau_s}")

    # scan
    sc = sec("scan")
    scan = ScanSettings(
        mode=sc.get_str("mode", "band"),
        f_start_hz=sc.get_float("f_start_hz"),
        f_end_hz=sc.get_float("f_end_hz"),
        tuning_limit=sc.get_float("tuning_limit", 0.10),
        dwell_s=sc.get_float("dwell_s"),
        step_hz=sc.get_float("step_hz"),
        budget_s=sc.get_float("budget_s"),
    )
    if scan.mode not in ("band", "timed"):
        raise ConfigError(f"[scan] mode must be band or timed, got {scan.mode!r}")

    # montecarlo
    mc = sec("montecarlo")
    try:
        modes = (_parse_modes(mc.get_str("modes")) if "modes" in mc.data
                 else (FUNDAMENTAL,))
    except ValueError as exc:
        raise ConfigError(f"[montecarlo] modes: {exc}") from exc
    monte = MonteCarloSettings(
        injected_g=mc.get_float("injected_g", 0.0),
        duration_s=mc.get_float("duration_s"),
        sample_rate_hz=mc.get_float("sample_rate_hz"),
        seed=mc.get_int("seed", 0),
        segment_s=mc.get_float("segment_s"),
        snr_threshold=mc.get_float("snr_threshold", 1.0),
        window_bins=mc.get_int("window_bins", 8),
        floor_mode=mc.get_str("floor_mode", "modeled"),
        search_f_lo_hz=mc.get_float("search_f_lo_hz"),
        search_f_hi_hz=mc.get_float("search_f_hi_hz"),
        modes=modes,
        with_thermal=mc.get_bool("with_thermal", True),
        with_backaction=mc.get_bool("with_backaction", True),
        with_imprecision=mc.get_bool("with_imprecision", True),
    )

    out = sec("output")
    return RunConfig(
        spec=spec, readout=readout, dm=dm,
        test_material=test_mat, reference_material=ref_mat, channel=channel,
        grid=grid, mode_f_max_hz=mode_f_max_hz, max_modes=max_modes,
        tau_s=tau_s, scan=scan, montecarlo=monte,
        output_dir=out.get_str("directory", "out"),
        echo=echo,
    )
