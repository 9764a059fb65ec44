"""Test-mass compositions and their coupling to a vector dark-matter field.

A vector field coupled to the baryon-minus-lepton (B-L) or baryon (B)
current pushes on a body in proportion to its charge-to-mass ratio.  Two
bodies with different compositions feel a differential acceleration; the
dimensionless suppression factor f12 below is the difference of their
charge-per-atomic-mass-unit values.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .constants import AMU_KG, E_CHARGE, EPS0, GEV_CM3_TO_J_M3, M_NUCLEON


class CouplingChannel(enum.Enum):
    """Which conserved current the dark photon couples to."""

    B_MINUS_L = "b-minus-l"
    B = "b"

    @classmethod
    def parse(cls, text: str) -> "CouplingChannel":
        for member in cls:
            if member.value == text.strip().lower():
                return member
        raise ValueError(f"unknown coupling channel {text!r}; "
                         f"expected one of {[m.value for m in cls]}")


@dataclass(frozen=True)
class Isotope:
    """A single nuclide: proton number Z, mass number A, atomic mass in amu."""

    symbol: str
    z: int
    a: int
    mass_amu: float

    def __post_init__(self):
        if self.z < 1:
            raise ValueError(f"{self.symbol}: Z must be >= 1, got {self.z}")
        if self.a < self.z:
            raise ValueError(f"{self.symbol}: A={self.a} < Z={self.z}")
        # atomic masses track A to well under a third of an amu
        if abs(self.mass_amu - self.a) >= 0.3:
            raise ValueError(f"{self.symbol}: mass {self.mass_amu} amu "
                             f"implausible for A={self.a}")

    @property
    def neutrons(self) -> int:
        return self.a - self.z


# AME2020 atomic masses, dominant isotopes only
ISOTOPES = {
    "H-1": Isotope("H-1", 1, 1, 1.00782503),
    "Be-9": Isotope("Be-9", 4, 9, 9.01218307),
    "N-14": Isotope("N-14", 7, 14, 14.00307401),
    "O-16": Isotope("O-16", 8, 16, 15.99491462),
    "Si-28": Isotope("Si-28", 14, 28, 27.97692653),
}


@dataclass(frozen=True)
class Composition:
    """A material as a tuple of (isotope, count-per-formula-unit) pairs."""

    name: str
    constituents: tuple[tuple[Isotope, float], ...]

    def __post_init__(self):
        if not self.constituents:
            raise ValueError(f"{self.name}: empty composition")
        for iso, count in self.constituents:
            if count <= 0:
                raise ValueError(f"{self.name}: count {count} for "
                                 f"{iso.symbol} must be > 0")
        if self.mass_amu <= 0:
            raise ValueError(f"{self.name}: non-positive total mass")

    @property
    def mass_amu(self) -> float:
        return sum(count * iso.mass_amu for iso, count in self.constituents)


SILICON_NITRIDE = Composition(
    "Si3N4", ((ISOTOPES["Si-28"], 3.0), (ISOTOPES["N-14"], 4.0)))
BERYLLIUM = Composition("Be", ((ISOTOPES["Be-9"], 1.0),))


def charge_per_amu(comp: Composition, channel: CouplingChannel) -> float:
    """Coupling charge per atomic mass unit of the composition.

    B-L counts neutrons, B counts all nucleons.  The denominator uses true
    isotopic masses; for the B channel the signal lives entirely in the
    per-isotope mass defect, so rounding masses to A would zero it out.
    """
    charge = 0.0
    mass = 0.0
    for iso, count in comp.constituents:
        q = iso.neutrons if channel is CouplingChannel.B_MINUS_L else iso.a
        charge += count * q
        mass += count * iso.mass_amu
    return charge / mass


def suppression_factor(comp_1: Composition, comp_2: Composition,
                       channel: CouplingChannel) -> float:
    """Differential-coupling factor f12 = |q1/mu1 - q2/mu2| (dimensionless)."""
    return abs(charge_per_amu(comp_1, channel) - charge_per_amu(comp_2, channel))


def gradient_suppression(baseline_m: float, wavelength_m: float) -> float:
    """Common-mode rejection scale pi*d/lambda for two masses a distance d
    apart in a field of de Broglie wavelength lambda."""
    if baseline_m < 0:
        raise ValueError(f"baseline must be >= 0, got {baseline_m}")
    if wavelength_m <= 0:
        raise ValueError(f"wavelength must be > 0, got {wavelength_m}")
    return math.pi * baseline_m / wavelength_m


@dataclass(frozen=True)
class DmForceScale:
    """Force and acceleration scale of the local dark-matter field on a
    single nucleon of unit coupling charge."""

    force_n: float          # N
    acceleration_m_s2: float  # m/s^2 per nucleon

    def __post_init__(self):
        if self.force_n <= 0 or self.acceleration_m_s2 <= 0:
            raise ValueError("force scale must be positive")


def dm_force_scale(rho_dm_gev_cm3: float = 0.4) -> DmForceScale:
    """Peak force F0 = e*sqrt(2 rho/eps0) on one unit of coupling charge,
    and the matching acceleration a0 = F0/m_nucleon."""
    if rho_dm_gev_cm3 <= 0:
        raise ValueError(f"dark-matter density must be > 0, got {rho_dm_gev_cm3}")
    rho_j_m3 = rho_dm_gev_cm3 * GEV_CM3_TO_J_M3
    force = E_CHARGE * math.sqrt(2.0 * rho_j_m3 / EPS0)
    return DmForceScale(force_n=force, acceleration_m_s2=force / M_NUCLEON)


def load_isotope_table(path) -> dict[str, Isotope]:
    """Read an isotope table: whitespace-separated columns
    ``symbol Z A mass_amu``, ``#`` comments allowed."""
    table: dict[str, Isotope] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 columns "
                                 f"(symbol Z A mass_amu), got {len(parts)}")
            symbol, z_s, a_s, m_s = parts
            try:
                iso = Isotope(symbol, int(z_s), int(a_s), float(m_s))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
            if symbol in table:
                raise ValueError(f"{path}:{lineno}: duplicate isotope {symbol}")
            table[symbol] = iso
    if not table:
        raise ValueError(f"{path}: no isotopes found")
    return table
