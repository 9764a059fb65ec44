"""Square stressed-membrane mechanics: mode spectrum, shapes, overlap with a
uniform drive, and the driven response function.

The membrane is a square plate of side L under uniform tensile stress,
read out interferometrically at its center.  Mode (i, j) has angular
frequency omega_ij = v*pi*sqrt(i^2+j^2)/L with v = sqrt(stress/density),
and every mode shares the same effective mass rho*h*L^2/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MembraneSpec:
    """Geometry, material, and thermal parameters of one membrane."""

    side_m: float = 0.10
    thickness_m: float = 200e-9
    density_kg_m3: float = 3100.0
    stress_pa: float = 1e9
    q0: float = 1e9               # mechanical quality factor
    temperature_k: float = 0.010

    def __post_init__(self):
        for name in ("side_m", "thickness_m", "density_kg_m3", "stress_pa",
                     "q0", "temperature_k"):
            value = getattr(self, name)
            if value <= 0:
                raise ValueError(f"{name} must be > 0, got {value}")
        if self.q0 < 10.0:
            raise ValueError(f"q0 = {self.q0} too small for a resonant model")

    @property
    def phase_velocity(self) -> float:
        """Transverse wave speed sqrt(stress/density), m/s."""
        return math.sqrt(self.stress_pa / self.density_kg_m3)

    @property
    def effective_mass(self) -> float:
        """Modal mass rho*h*L^2/4 (kg); the same for every mode."""
        return self.density_kg_m3 * self.thickness_m * self.side_m**2 / 4.0


@dataclass(frozen=True, order=True)
class ModeIndex:
    """Transverse mode numbers (i, j), both >= 1."""

    i: int
    j: int

    def __post_init__(self):
        if self.i < 1 or self.j < 1:
            raise ValueError(f"mode indices must be >= 1, got ({self.i}, {self.j})")


FUNDAMENTAL = ModeIndex(1, 1)


def mode_frequency(spec: MembraneSpec, idx: ModeIndex) -> float:
    """Angular frequency of mode (i, j), rad/s."""
    return (spec.phase_velocity * math.pi
            * math.sqrt(idx.i**2 + idx.j**2) / spec.side_m)


def mode_shape(idx: ModeIndex, y, z, side_m: float):
    """Displacement profile over the membrane, unit amplitude at antinodes.

    Coordinates run over [-L/2, L/2] with the readout spot at the origin;
    odd indices give cosine (center antinode), even give sine (center node).
    """
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    half = side_m / 2.0
    if np.any(np.abs(y) > half) or np.any(np.abs(z) > half):
        raise ValueError("coordinates outside the membrane")

    def profile(n: int, u):
        arg = n * np.pi * u / side_m
        return np.cos(arg) if n % 2 == 1 else np.sin(arg)

    return profile(idx.i, y) * profile(idx.j, z)


def overlap_factor(idx: ModeIndex) -> float:
    """Coupling beta_ij of a spatially uniform force to mode (i, j).

    Zero when either index is even (node at the readout point and zero net
    force overlap); for odd pairs beta = (4/pi)^2 / (i*j) with alternating
    sign, so beta_11 = (4/pi)^2 ~ 1.62.
    """
    if idx.i % 2 == 0 or idx.j % 2 == 0:
        return 0.0
    sign = -1.0 if ((idx.i + idx.j) // 2) % 2 == 0 else 1.0
    return sign * (4.0 / math.pi) ** 2 / (idx.i * idx.j)


def susceptibility(spec: MembraneSpec, idx: ModeIndex, omega):
    """Mechanical response x/F_per_mass (s^2): 1/(omega^2 - omega0^2 + i*omega0^2/Q0).

    Structural damping: the loss term is frequency-independent, so
    |chi(omega0)| = Q0/omega0^2 exactly and Im(chi) < 0 everywhere.
    """
    omega = np.asarray(omega, dtype=float)
    omega0 = mode_frequency(spec, idx)
    return 1.0 / (omega**2 - omega0**2 + 1j * omega0**2 / spec.q0)


@dataclass(frozen=True)
class ModeData:
    """One enumerated mode: index, frequency, drive overlap, modal mass."""

    index: ModeIndex
    omega_rad_s: float
    beta: float
    mass_kg: float


def enumerate_modes(spec: MembraneSpec, f_max_hz: float = 30e3,
                    max_modes: int = 2000) -> list[ModeData]:
    """All modes with frequency <= f_max_hz, sorted by frequency.

    Degenerate pairs such as (5,5) and (1,7) are kept as separate entries.
    Enumeration stops at max_modes even if the band is not exhausted.
    """
    if f_max_hz <= 0:
        raise ValueError(f"f_max_hz must be > 0, got {f_max_hz}")
    if max_modes < 1:
        raise ValueError(f"max_modes must be >= 1, got {max_modes}")
    omega_max = 2.0 * math.pi * f_max_hz
    base = spec.phase_velocity * math.pi / spec.side_m  # omega at sqrt(i^2+j^2)=1
    s_max = (omega_max / base) ** 2  # keep modes with i^2 + j^2 <= s_max
    modes = []
    for i in range(1, int(math.floor(math.sqrt(s_max))) + 1):
        j_sq_max = s_max - i * i
        if j_sq_max < 1:
            break
        for j in range(1, int(math.floor(math.sqrt(j_sq_max))) + 1):
            idx = ModeIndex(i, j)
            modes.append(ModeData(
                index=idx,
                omega_rad_s=mode_frequency(spec, idx),
                beta=overlap_factor(idx),
                mass_kg=spec.effective_mass,
            ))
    modes.sort(key=lambda m: (m.omega_rad_s, m.index.i, m.index.j))
    return modes[:max_modes]
