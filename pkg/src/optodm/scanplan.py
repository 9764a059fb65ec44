"""Stepped-scan and array-campaign planning.

A membrane survey retunes the resonance across a band in steps of the
local detection bandwidth, dwelling one field coherence time per step.
An array campaign splits a band across several membranes, each sweeping
its own tuning window concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import InfeasibleError
from .membrane import FUNDAMENTAL, MembraneSpec, mode_frequency
from .noisebudget import OpticalReadout, detection_bandwidth


@dataclass(frozen=True)
class ScanStep:
    """One dwell: band [omega_lo, omega_lo + width] probed for dwell_s."""

    index: int
    omega_center_rad_s: float
    width_rad_s: float
    dwell_s: float
    cumulative_s: float


@dataclass(frozen=True)
class ScanPlan:
    """A tiled sweep over [omega_start, omega_end]."""

    omega_start_rad_s: float
    omega_end_rad_s: float
    steps: tuple[ScanStep, ...]
    total_time_s: float
    fractional_coverage: float    # of the requested band; < 1 when truncated
    truncated: bool               # tuning limit cut the band short

    @property
    def n_steps(self) -> int:
        return len(self.steps)


def _retuned(spec: MembraneSpec, omega: float) -> MembraneSpec:
    """Membrane retuned (via stress) so the fundamental sits at omega."""
    omega_now = mode_frequency(spec, FUNDAMENTAL)
    scale = (omega / omega_now) ** 2
    return replace(spec, stress_pa=spec.stress_pa * scale)


def _tile_band(width_fn, dwell_fn, omega_start: float, omega_end: float,
               max_steps: int = 2_000_000) -> list[ScanStep]:
    """Greedy left-to-right tiling; widths add up to the span exactly.

    width_fn is evaluated at each step's left edge; the final step is
    truncated to end on omega_end.
    """
    steps: list[ScanStep] = []
    edge = omega_start
    cumulative = 0.0
    while edge < omega_end:
        if len(steps) >= max_steps:
            raise InfeasibleError(f"tiling exceeded {max_steps} steps; "
                                  "band too wide for this bandwidth")
        width = width_fn(edge)
        if width <= 0:
            raise InfeasibleError(f"non-positive step width at {edge} rad/s")
        width = min(width, omega_end - edge)
        center = edge + width / 2.0
        dwell = dwell_fn(center)
        cumulative += dwell
        steps.append(ScanStep(index=len(steps), omega_center_rad_s=center,
                              width_rad_s=width, dwell_s=dwell,
                              cumulative_s=cumulative))
        edge += width
    return steps


def plan_scan(spec: MembraneSpec, readout: OpticalReadout, q_dm: float,
              omega_start_rad_s: float, omega_end_rad_s: float,
              tuning_limit: float = 0.10) -> ScanPlan:
    """Tile a band with recomputed bandwidth and dwell at every step.

    The membrane is assumed retuned so its fundamental tracks the step
    position; dwell is the local coherence time 2 q_dm / omega.  A band
    reaching beyond omega_start * (1 + tuning_limit) is planned up to the
    limit and flagged truncated.
    """
    if omega_start_rad_s <= 0:
        raise ValueError(f"omega_start must be > 0, got {omega_start_rad_s}")
    if omega_end_rad_s < omega_start_rad_s:
        raise ValueError("omega_end must be >= omega_start")
    if q_dm <= 1:
        raise ValueError(f"q_dm must be > 1, got {q_dm}")
    if tuning_limit <= 0:
        raise ValueError(f"tuning limit must be > 0, got {tuning_limit}")

    def dwell_fn(omega: float) -> float:
        return 2.0 * q_dm / omega

    if omega_end_rad_s == omega_start_rad_s:
        step = ScanStep(index=0, omega_center_rad_s=omega_start_rad_s,
                        width_rad_s=0.0, dwell_s=dwell_fn(omega_start_rad_s),
                        cumulative_s=dwell_fn(omega_start_rad_s))
        return ScanPlan(omega_start_rad_s, omega_end_rad_s, (step,),
                        step.dwell_s, 1.0, False)

    reach = omega_start_rad_s * (1.0 + tuning_limit)
    end = min(omega_end_rad_s, reach)
    truncated = end < omega_end_rad_s

    def width_fn(omega: float) -> float:
        return detection_bandwidth(_retuned(spec, omega), readout)

    steps = _tile_band(width_fn, dwell_fn, omega_start_rad_s, end)
    coverage = ((end - omega_start_rad_s)
                / (omega_end_rad_s - omega_start_rad_s))
    return ScanPlan(omega_start_rad_s, omega_end_rad_s, tuple(steps),
                    steps[-1].cumulative_s if steps else 0.0,
                    coverage, truncated)


def plan_timed_scan(omega_start_rad_s: float, step_rad_s: float,
                    dwell_s: float, budget_s: float) -> ScanPlan:
    """Fixed-step, fixed-dwell plan that packs a time budget.

    Steps fit while their dwells sum to at most budget_s; coverage is
    reported as 1 (the band is defined by what fits).
    """
    if omega_start_rad_s <= 0 or step_rad_s <= 0 or dwell_s <= 0:
        raise ValueError("omega_start, step, and dwell must be > 0")
    if budget_s < dwell_s:
        raise ValueError("time budget shorter than a single dwell")
    n = int(budget_s // dwell_s)
    steps = tuple(
        ScanStep(index=k,
                 omega_center_rad_s=omega_start_rad_s + (k + 0.5) * step_rad_s,
                 width_rad_s=step_rad_s,
                 dwell_s=dwell_s,
                 cumulative_s=(k + 1) * dwell_s)
        for k in range(n))
    return ScanPlan(omega_start_rad_s, omega_start_rad_s + n * step_rad_s,
                    steps, n * dwell_s, 1.0, False)


@dataclass(frozen=True)
class CampaignSummary:
    """Band coverage of a concurrent multi-membrane campaign."""

    omega_band_rad_s: tuple[float, float]
    plans: tuple[ScanPlan, ...]
    coverage_fraction: float      # of the target band covered by some membrane
    wall_clock_s: float           # longest single-membrane plan
    detector_time_s: float        # summed over membranes


def plan_array_campaign(specs: list[MembraneSpec], readout: OpticalReadout,
                        q_dm: float, omega_band_rad_s: tuple[float, float],
                        tuning_limit: float = 0.10) -> CampaignSummary:
    """Plan every membrane over its own tuning window inside the band.

    Membranes run concurrently, so wall clock is the slowest plan; the
    coverage fraction reports honestly how much of the requested band the
    union of windows reaches.
    """
    lo, hi = omega_band_rad_s
    if not specs:
        raise ValueError("no membranes given")
    if lo <= 0 or hi <= lo:
        raise ValueError("need 0 < band_lo < band_hi")
    plans = []
    intervals = []
    for spec in specs:
        w0 = mode_frequency(spec, FUNDAMENTAL)
        start = max(lo, min(w0, hi))
        end = min(hi, w0 * (1.0 + tuning_limit))
        if end <= start:
            continue
        plan = plan_scan(spec, readout, q_dm, start, end,
                         tuning_limit=tuning_limit * (1.0 + 1e-12))
        plans.append(plan)
        intervals.append((start, start + (end - start) * plan.fractional_coverage))
    if not plans:
        raise InfeasibleError("no membrane reaches the requested band")

    intervals.sort()
    covered = 0.0
    cur_lo, cur_hi = intervals[0]
    for a, b in intervals[1:]:
        if a > cur_hi:
            covered += cur_hi - cur_lo
            cur_lo, cur_hi = a, b
        else:
            cur_hi = max(cur_hi, b)
    covered += cur_hi - cur_lo

    return CampaignSummary(
        omega_band_rad_s=(lo, hi),
        plans=tuple(plans),
        coverage_fraction=covered / (hi - lo),
        wall_clock_s=max(p.total_time_s for p in plans),
        detector_time_s=sum(p.total_time_s for p in plans),
    )
