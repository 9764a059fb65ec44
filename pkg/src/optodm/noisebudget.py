"""Displacement and acceleration noise budget of the cavity-read membrane.

Three fundamental terms: shot-noise imprecision of the cavity readout
(white in displacement), radiation-pressure backaction, and structural
thermal force noise (both white in force, colored by the mechanical
response).  Acceleration-referred detector noise is

    S_aa_det = |chi|^-2 * S_imp + S_ba + S_th

which dips to nearly S_ba + S_th inside the detection bandwidth around
each mechanical resonance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT, HBAR, K_B
from .errors import UnresolvedResonanceError
from .membrane import (FUNDAMENTAL, MembraneSpec, ModeData, ModeIndex,
                       enumerate_modes, mode_frequency, susceptibility)


@dataclass(frozen=True)
class OpticalReadout:
    """Cavity readout: finesse, input power, wavelength, detection efficiency."""

    finesse: float = 100.0
    power_w: float = 0.3e-3
    wavelength_m: float = 1e-6
    efficiency: float = 1.0

    def __post_init__(self):
        if self.finesse <= 0 or self.power_w <= 0 or self.wavelength_m <= 0:
            raise ValueError("finesse, power, and wavelength must be > 0")
        if not 0.0 < self.efficiency <= 1.0:
            raise ValueError(f"efficiency must be in (0, 1], got {self.efficiency}")


def imprecision_psd(readout: OpticalReadout) -> float:
    """Shot-noise displacement floor, m^2/Hz (single-sided, white)."""
    return (math.pi * HBAR * C_LIGHT * readout.wavelength_m
            / (64.0 * readout.efficiency * readout.finesse**2 * readout.power_w))


def backaction_psd(mass_kg: float, s_imp: float) -> float:
    """Radiation-pressure acceleration noise, (m/s^2)^2/Hz.

    Tied to the imprecision by the Heisenberg pair product
    S_imp * S_ba = hbar^2/m^2 at unit efficiency.
    """
    if mass_kg <= 0 or s_imp <= 0:
        raise ValueError("mass and imprecision must be > 0")
    return HBAR**2 / (mass_kg**2 * s_imp)


def thermal_psd(spec: MembraneSpec, omega0: float) -> float:
    """Structural-damping thermal acceleration noise 4 kB T omega0 / (m Q0),
    (m/s^2)^2/Hz, for the mode resonant at omega0."""
    if omega0 <= 0:
        raise ValueError(f"omega0 must be > 0, got {omega0}")
    return (4.0 * K_B * spec.temperature_k * omega0
            / (spec.effective_mass * spec.q0))


def detector_noise_psd(spec: MembraneSpec, readout: OpticalReadout,
                       idx: ModeIndex, omega):
    """Acceleration-referred detector noise |chi|^-2 S_imp + S_ba + S_th."""
    chi = susceptibility(spec, idx, omega)
    s_imp = imprecision_psd(readout)
    s_ba = backaction_psd(spec.effective_mass, s_imp)
    s_th = thermal_psd(spec, mode_frequency(spec, idx))
    return s_imp / np.abs(chi) ** 2 + s_ba + s_th


def total_displacement_psd(spec: MembraneSpec, readout: OpticalReadout,
                           idx: ModeIndex, omega, s_aa_dm=0.0):
    """Displacement PSD at the readout: S_imp + |chi|^2 (S_ba + S_th + S_dm)."""
    chi = susceptibility(spec, idx, omega)
    s_imp = imprecision_psd(readout)
    s_ba = backaction_psd(spec.effective_mass, s_imp)
    s_th = thermal_psd(spec, mode_frequency(spec, idx))
    return s_imp + np.abs(chi) ** 2 * (s_ba + s_th + np.asarray(s_aa_dm))


def sql_psd(spec: MembraneSpec, idx: ModeIndex, omega):
    """Standard quantum limit 2 hbar / (m |chi(omega)|), (m/s^2)^2/Hz."""
    chi = susceptibility(spec, idx, omega)
    return 2.0 * HBAR / (spec.effective_mass * np.abs(chi))


def multimode_effective_noise(spec: MembraneSpec, readout: OpticalReadout,
                              modes: list[ModeData], omega):
    """Dark-matter-referred effective noise using every coupled mode:

        S_eff = (S_imp + sum_ij |chi_ij|^2 (S_th_ij + S_ba))
                / (sum_ij |chi_ij|^2 beta_ij^2)

    Modes with beta = 0 have a node at the readout spot and drop out of
    both sums.
    """
    omega = np.asarray(omega, dtype=float)
    coupled = [m for m in modes if m.beta != 0.0]
    if not coupled:
        raise ValueError("no modes couple to the readout")
    s_imp = imprecision_psd(readout)
    s_ba = backaction_psd(spec.effective_mass, s_imp)
    numer = np.full(omega.shape, s_imp, dtype=float)
    denom = np.zeros(omega.shape, dtype=float)
    for m in coupled:
        chi2 = np.abs(susceptibility(spec, m.index, omega)) ** 2
        s_th = thermal_psd(spec, m.omega_rad_s)
        numer += chi2 * (s_th + s_ba)
        denom += chi2 * m.beta**2
    return numer / denom


def detection_bandwidth(spec: MembraneSpec, readout: OpticalReadout,
                        idx: ModeIndex = FUNDAMENTAL,
                        rel_tol: float = 1e-3) -> float:
    """Width (rad/s) of the band around the resonance where transduced
    thermal + backaction noise clears the imprecision floor.

    Edges are located by bisection to the requested relative tolerance.
    Raises UnresolvedResonanceError when even the on-resonance peak stays
    below the floor.
    """
    omega0 = mode_frequency(spec, idx)
    s_imp = imprecision_psd(readout)
    s_ba = backaction_psd(spec.effective_mass, s_imp)
    s_th = thermal_psd(spec, omega0)

    def excess(omega: float) -> float:
        chi2 = 1.0 / ((omega**2 - omega0**2) ** 2 + (omega0**2 / spec.q0) ** 2)
        return chi2 * (s_th + s_ba) - s_imp

    if excess(omega0) <= 0.0:
        raise UnresolvedResonanceError(
            f"resonance at {omega0:.6g} rad/s not resolved above the "
            f"imprecision floor at this power")

    def edge(inside: float, outside: float) -> float:
        # excess(inside) > 0 >= excess(outside); bisect until the bracket
        # is small against the edge's own distance from resonance
        for _ in range(200):
            if abs(inside - outside) <= rel_tol * abs(0.5 * (inside + outside) - omega0):
                break
            mid = 0.5 * (inside + outside)
            if excess(mid) > 0.0:
                inside = mid
            else:
                outside = mid
        return 0.5 * (inside + outside)

    hi = omega0 * 2.0
    while excess(hi) > 0.0:  # |chi| falls monotonically above omega0
        hi *= 2.0
    upper = edge(omega0, hi)

    if excess(0.0) > 0.0:
        lower = 0.0  # floor never wins below resonance; band reaches DC
    else:
        lower = edge(omega0, 0.0)
    return upper - lower


@dataclass(frozen=True)
class FrequencyGrid:
    """Evaluation grid policy: logarithmic base plus dense refinement around
    each resonance so high-Q peaks are never stepped over."""

    f_min_hz: float = 500.0
    f_max_hz: float = 30e3
    points_per_decade: int = 300
    refine: bool = True
    refine_linewidths: float = 10.0   # half-span of the linear window, in omega0/Q0
    refine_points: int = 40           # linear points per side inside that window
    ladder_points: int = 48           # log-detuning points per side out to f0/10

    def __post_init__(self):
        if self.f_min_hz <= 0 or self.f_max_hz <= self.f_min_hz:
            raise ValueError("need 0 < f_min < f_max")
        if self.points_per_decade < 2:
            raise ValueError("points_per_decade must be >= 2")


def build_grid(grid: FrequencyGrid, spec: MembraneSpec | None = None,
               resonances_rad_s=None) -> np.ndarray:
    """Angular-frequency grid (rad/s), sorted and unique.

    Around every resonance in band: the exact peak, a linear window of
    +-refine_linewidths * omega0/Q0, and a geometric detuning ladder from
    half a linewidth out to a tenth of the resonance frequency.
    """
    w_min = 2.0 * math.pi * grid.f_min_hz
    w_max = 2.0 * math.pi * grid.f_max_hz
    decades = math.log10(w_max / w_min)
    n_base = max(int(round(decades * grid.points_per_decade)), 2)
    points = [np.geomspace(w_min, w_max, n_base)]

    if grid.refine and (resonances_rad_s is not None or spec is not None):
        if resonances_rad_s is None:
            resonances_rad_s = [(m.omega_rad_s, spec.q0)
                                for m in enumerate_modes(spec, grid.f_max_hz)]
        for entry in resonances_rad_s:
            omega0, q0 = entry if isinstance(entry, tuple) else (entry, spec.q0)
            if not w_min <= omega0 <= w_max:
                continue
            lw = omega0 / q0
            lin = omega0 + np.linspace(-grid.refine_linewidths * lw,
                                       grid.refine_linewidths * lw,
                                       2 * grid.refine_points + 1)
            ladder = np.geomspace(0.5 * lw, omega0 / 10.0, grid.ladder_points)
            points.extend([lin, omega0 - ladder, omega0 + ladder,
                           np.array([omega0])])
    omega = np.concatenate(points)
    omega = omega[(omega >= w_min) & (omega <= w_max)]
    return np.unique(omega)


@dataclass(frozen=True)
class NoiseBudget:
    """Tabulated budget over a frequency grid (all arrays aligned)."""

    omega_rad_s: np.ndarray
    sxx_imp: np.ndarray     # m^2/Hz
    sxx_th: np.ndarray      # m^2/Hz
    sxx_ba: np.ndarray      # m^2/Hz
    sxx_tot: np.ndarray     # m^2/Hz
    saa_det: np.ndarray     # (m/s^2)^2/Hz
    saa_sql: np.ndarray     # (m/s^2)^2/Hz

    def __post_init__(self):
        n = len(self.omega_rad_s)
        for name in ("sxx_imp", "sxx_th", "sxx_ba", "sxx_tot",
                     "saa_det", "saa_sql"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length mismatch")

    @property
    def f_hz(self) -> np.ndarray:
        return self.omega_rad_s / (2.0 * math.pi)


def compute_budget(spec: MembraneSpec, readout: OpticalReadout,
                   idx: ModeIndex = FUNDAMENTAL,
                   omega=None, grid: FrequencyGrid | None = None) -> NoiseBudget:
    """Evaluate the single-mode noise budget on a grid (build one if absent)."""
    if omega is None:
        omega0 = mode_frequency(spec, idx)
        if grid is None:
            grid = FrequencyGrid(f_min_hz=omega0 / (2 * math.pi) / 4.0,
                                 f_max_hz=omega0 / (2 * math.pi) * 4.0)
        omega = build_grid(grid, resonances_rad_s=[(omega0, spec.q0)])
    omega = np.asarray(omega, dtype=float)
    chi2 = np.abs(susceptibility(spec, idx, omega)) ** 2
    s_imp = imprecision_psd(readout)
    s_ba = backaction_psd(spec.effective_mass, s_imp)
    s_th = thermal_psd(spec, mode_frequency(spec, idx))
    sxx_imp = np.full_like(omega, s_imp)
    sxx_th = chi2 * s_th
    sxx_ba = chi2 * s_ba
    return NoiseBudget(
        omega_rad_s=omega,
        sxx_imp=sxx_imp,
        sxx_th=sxx_th,
        sxx_ba=sxx_ba,
        sxx_tot=sxx_imp + sxx_th + sxx_ba,
        saa_det=s_imp / chi2 + s_ba + s_th,
        saa_sql=sql_psd(spec, idx, omega),
    )
