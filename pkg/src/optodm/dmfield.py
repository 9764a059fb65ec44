"""Stochastic model of the galactic vector dark-matter field.

The field oscillates at the Compton frequency of the particle mass and
stays phase-coherent only for tau_dm = 2 Q_dm / omega_dm, after which the
local phase and polarization re-randomize.  On timescales long against
tau_dm the acceleration it drives has a Lorentzian power spectrum centered
on omega_dm with half-width 1/tau_dm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT, EV_TO_J, HBAR, PLANCK
from .materials import dm_force_scale


def compton_frequency(mass_ev: float) -> float:
    """Angular frequency (rad/s) of a field of the given particle mass."""
    if mass_ev <= 0:
        raise ValueError(f"mass must be > 0, got {mass_ev} eV")
    return mass_ev * EV_TO_J / HBAR


def mass_from_frequency(omega_rad_s: float) -> float:
    """Particle mass (eV) whose Compton angular frequency is omega."""
    if omega_rad_s <= 0:
        raise ValueError(f"frequency must be > 0, got {omega_rad_s} rad/s")
    return omega_rad_s * HBAR / EV_TO_J


def de_broglie_wavelength(mass_ev: float, v_vir: float = 1e-3) -> float:
    """Coherence length (m) of the field for virial speed v_vir * c."""
    if not 0.0 < v_vir < 1.0:
        raise ValueError(f"v_vir must be in (0, 1), got {v_vir}")
    mass_kg = mass_ev * EV_TO_J / C_LIGHT**2
    return PLANCK / (mass_kg * v_vir * C_LIGHT)


def coherence_time(mass_ev: float, q_dm: float = 5e5) -> float:
    """Time (s) over which the field keeps a definite phase."""
    if q_dm <= 1:
        raise ValueError(f"q_dm must be > 1, got {q_dm}")
    return 2.0 * q_dm / compton_frequency(mass_ev)


@dataclass(frozen=True)
class DmModel:
    """Dark-matter field parameters at one candidate particle mass."""

    mass_ev: float
    q_dm: float = 5e5            # coherence quality factor omega*tau/2
    rho_dm_gev_cm3: float = 0.4  # local energy density
    v_vir: float = 1e-3          # virial speed in units of c

    def __post_init__(self):
        if self.mass_ev <= 0:
            raise ValueError(f"mass must be > 0, got {self.mass_ev} eV")
        if self.q_dm <= 1:
            raise ValueError(f"q_dm must be > 1, got {self.q_dm}")
        if not 0.0 < self.v_vir < 1.0:
            raise ValueError(f"v_vir must be in (0, 1), got {self.v_vir}")
        if self.rho_dm_gev_cm3 <= 0:
            raise ValueError(f"density must be > 0, got {self.rho_dm_gev_cm3}")

    @classmethod
    def from_frequency(cls, omega_rad_s: float, **kwargs) -> "DmModel":
        return cls(mass_ev=mass_from_frequency(omega_rad_s), **kwargs)

    @property
    def omega_dm(self) -> float:
        return compton_frequency(self.mass_ev)

    @property
    def tau_dm(self) -> float:
        return coherence_time(self.mass_ev, self.q_dm)

    @property
    def lambda_dm(self) -> float:
        return de_broglie_wavelength(self.mass_ev, self.v_vir)

    @property
    def a0(self) -> float:
        """Per-nucleon acceleration scale of the field (m/s^2)."""
        return dm_force_scale(self.rho_dm_gev_cm3).acceleration_m_s2


@dataclass(frozen=True)
class DmSignalAmplitude:
    """Differential-acceleration amplitude a_dm = beta * g * f12 * a0 / sqrt(3).

    The sqrt(3) averages over the random field polarization; beta is the
    detector-mode overlap and may carry a sign, which only the generator's
    phase sees.
    """

    g: float       # coupling strength (dimensionless)
    f12: float     # composition suppression factor
    beta: float    # mode overlap factor
    a0: float      # per-nucleon acceleration scale, m/s^2

    def __post_init__(self):
        if self.g < 0:
            raise ValueError(f"coupling must be >= 0, got {self.g}")
        if self.f12 < 0:
            raise ValueError(f"f12 must be >= 0, got {self.f12}")
        if self.a0 <= 0:
            raise ValueError(f"a0 must be > 0, got {self.a0}")

    @property
    def a_dm(self) -> float:
        """Peak amplitude of the acceleration drive (m/s^2); <a^2> = a_dm^2/2."""
        return abs(self.beta) * self.g * self.f12 * self.a0 / np.sqrt(3.0)


def signal_amplitude(g: float, f12: float, beta: float, a0: float) -> DmSignalAmplitude:
    return DmSignalAmplitude(g=g, f12=f12, beta=beta, a0=a0)


def lorentzian_psd(omega, amplitude: DmSignalAmplitude, dm: DmModel):
    """Single-sided acceleration PSD of the stochastic drive, (m/s^2)^2/Hz.

    Peak value a_dm^2 * tau_dm at omega_dm; integral over f of the full
    line is a_dm^2 / 2 = <a^2>.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("omega must be >= 0 for a single-sided PSD")
    tau = dm.tau_dm
    return amplitude.a_dm**2 * tau / (1.0 + tau**2 * (omega - dm.omega_dm) ** 2)


def sample_signal(amplitude: DmSignalAmplitude, dm: DmModel, duration_s: float,
                  sample_rate_hz: float, seed=None, rng=None) -> np.ndarray:
    """Draw one realization a(t) = a_dm * cos(omega_dm t + theta(t)).

    theta(t) is piecewise constant: decorrelation events arrive as a
    Poisson process with mean interval tau_dm and each event re-draws the
    phase uniformly.  Averaged over realizations this gives the Lorentzian
    PSD above.
    """
    if duration_s <= 0:
        raise ValueError(f"duration must be > 0, got {duration_s}")
    f_dm = dm.omega_dm / (2.0 * np.pi)
    if sample_rate_hz <= 2.0 * f_dm:
        raise ValueError(f"sample rate {sample_rate_hz} Hz does not resolve "
                         f"the {f_dm:.3g} Hz carrier")
    n = int(round(duration_s * sample_rate_hz))
    if n < 2:
        raise ValueError("fewer than 2 samples requested")
    if rng is None:
        rng = np.random.default_rng(seed)

    t = np.arange(n) / sample_rate_hz
    tau = dm.tau_dm
    # expected jump count ~ duration/tau; draw with headroom, extend if unlucky
    jumps = []
    t_next = rng.exponential(tau)
    while t_next < duration_s:
        jumps.append(t_next)
        t_next += rng.exponential(tau)
    edges = np.asarray(jumps)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=len(edges) + 1)
    segment = np.searchsorted(edges, t, side="right")
    theta = phases[segment]
    return amplitude.a_dm * np.cos(dm.omega_dm * t + theta)
