"""Spectral estimation and minimum-detectable-coupling forecasts.

The search statistic is an averaged periodogram with segment length
matched to the field coherence time.  A signal at SNR >= 1 against the
per-bin floor scatter sets the smallest resolvable coupling

    g_min = sqrt(3)/(beta f12 a0) * sqrt(S_aa_det / tau_dm) * B(tau)

with B = (tau_dm/tau)^(1/2) below the coherence time and (tau_dm/tau)^(1/4)
above it, continuous at tau = tau_dm.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .constants import K_B
from .dmfield import DmModel, mass_from_frequency
from .membrane import (FUNDAMENTAL, MembraneSpec, ModeData, ModeIndex,
                       mode_frequency, overlap_factor)
from .noisebudget import (OpticalReadout, detector_noise_psd,
                          multimode_effective_noise)


@dataclass(frozen=True)
class PeriodogramEstimate:
    """Averaged single-sided periodogram over non-overlapping segments."""

    f_hz: np.ndarray
    power: np.ndarray          # units of input^2 / Hz
    n_segments: int
    segment_duration_s: float

    @property
    def df_hz(self) -> float:
        return 1.0 / self.segment_duration_s


def periodogram(series: np.ndarray, sample_rate_hz: float,
                segment_duration_s: float) -> PeriodogramEstimate:
    """Average of rectangular-window periodograms of non-overlapping segments.

    Normalization is single-sided (DC and Nyquist halved): a sinusoid of
    amplitude a centered on a bin yields a peak a^2 T/2 and white noise of
    PSD S0 converges to S0.  A trailing partial segment is discarded.
    """
    series = np.asarray(series, dtype=float)
    if series.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if sample_rate_hz <= 0 or segment_duration_s <= 0:
        raise ValueError("sample rate and segment duration must be > 0")
    n_per = int(round(segment_duration_s * sample_rate_hz))
    if n_per < 2:
        raise ValueError("segment shorter than 2 samples")
    n_seg = len(series) // n_per
    if n_seg < 1:
        raise ValueError(f"series of {len(series)} samples shorter than one "
                         f"{n_per}-sample segment")
    blocks = series[:n_seg * n_per].reshape(n_seg, n_per)
    spec = np.fft.rfft(blocks, axis=1)
    power = (2.0 / (sample_rate_hz * n_per)) * np.abs(spec) ** 2
    power[:, 0] /= 2.0
    if n_per % 2 == 0:
        power[:, -1] /= 2.0
    return PeriodogramEstimate(
        f_hz=np.fft.rfftfreq(n_per, d=1.0 / sample_rate_hz),
        power=power.mean(axis=0),
        n_segments=n_seg,
        segment_duration_s=n_per / sample_rate_hz,
    )


def noise_floor_sigma(estimate: PeriodogramEstimate) -> np.ndarray:
    """Per-bin 1-sigma scatter of the averaged floor: mean / sqrt(N)."""
    return estimate.power / math.sqrt(estimate.n_segments)


class Regime(enum.Enum):
    """Which side of the field coherence time the integration sits on."""

    SUB_COHERENCE = "sub"
    SUPER_COHERENCE = "super"


@dataclass(frozen=True)
class SensitivityPoint:
    """Minimum detectable coupling at one candidate frequency."""

    omega_rad_s: float
    g_min: float
    regime: Regime
    mode_count: int = 1

    @property
    def f_hz(self) -> float:
        return self.omega_rad_s / (2.0 * math.pi)

    @property
    def mass_ev(self) -> float:
        return mass_from_frequency(self.omega_rad_s)


def _branch(tau_s: float, tau_dm: float) -> tuple[float, Regime]:
    if tau_s <= 0:
        raise ValueError(f"integration time must be > 0, got {tau_s}")
    if tau_s <= tau_dm:
        return math.sqrt(tau_dm / tau_s), Regime.SUB_COHERENCE
    return (tau_dm / tau_s) ** 0.25, Regime.SUPER_COHERENCE


def g_min(omega_rad_s: float, saa_det: float, tau_s: float, dm: DmModel,
          f12: float, beta: float, mode_count: int = 1) -> SensitivityPoint:
    """Smallest coupling detectable at SNR = 1 for a candidate at omega.

    The coherence time is evaluated at the candidate frequency (the field
    quality factor rides along from `dm`), not at dm.mass_ev.
    """
    if saa_det <= 0:
        raise ValueError(f"detector noise must be > 0, got {saa_det}")
    if f12 <= 0 or beta == 0.0:
        raise ValueError("f12 must be > 0 and beta nonzero")
    tau_dm = 2.0 * dm.q_dm / omega_rad_s
    branch, regime = _branch(tau_s, tau_dm)
    base = (math.sqrt(3.0) / (abs(beta) * f12 * dm.a0)
            * math.sqrt(saa_det / tau_dm))
    return SensitivityPoint(omega_rad_s=omega_rad_s, g_min=base * branch,
                            regime=regime, mode_count=mode_count)


def g_min_thermal_floor(spec: MembraneSpec, dm: DmModel, f12: float,
                        tau_s: float, idx: ModeIndex = FUNDAMENTAL,
                        beta: float | None = None) -> SensitivityPoint:
    """Thermal-noise-limited bound at the mode resonance:

        g = sqrt(3/2)/(beta f12 a0) * sqrt(4 kB T omega0^2/(m Q0 Q_dm)) * B(tau)
    """
    omega0 = mode_frequency(spec, idx)
    if beta is None:
        beta = overlap_factor(idx)
    if beta == 0.0:
        raise ValueError(f"mode {idx} does not couple to a uniform drive")
    tau_dm = 2.0 * dm.q_dm / omega0
    branch, regime = _branch(tau_s, tau_dm)
    g = (math.sqrt(1.5) / (abs(beta) * f12 * dm.a0)
         * math.sqrt(4.0 * K_B * spec.temperature_k * omega0**2
                     / (spec.effective_mass * spec.q0 * dm.q_dm))
         * branch)
    return SensitivityPoint(omega_rad_s=omega0, g_min=g, regime=regime)


def sensitivity_curve(spec: MembraneSpec, readout: OpticalReadout,
                      omega, dm: DmModel, f12: float,
                      tau_s: float | None = None,
                      idx: ModeIndex = FUNDAMENTAL,
                      modes: list[ModeData] | None = None) -> list[SensitivityPoint]:
    """Exclusion forecast over a frequency grid.

    Single-mode: detector noise of `idx` with its own overlap factor.
    Multimode (modes given): the effective noise already folds the overlap
    of every coupled mode in, so the prefactor uses beta = 1.  tau_s = None
    integrates one coherence time at each candidate frequency.
    """
    omega = np.asarray(omega, dtype=float)
    if len(omega) == 0:
        raise ValueError("empty frequency grid")
    if modes is None:
        saa = detector_noise_psd(spec, readout, idx, omega)
        beta = overlap_factor(idx)
        count = 1
    else:
        saa = multimode_effective_noise(spec, readout, modes, omega)
        beta = 1.0
        count = sum(1 for m in modes if m.beta != 0.0)
    points = []
    for w, s in zip(omega, saa):
        tau = 2.0 * dm.q_dm / w if tau_s is None else tau_s
        points.append(g_min(w, s, tau, dm, f12, beta, mode_count=count))
    return points
