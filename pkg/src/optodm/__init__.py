"""Simulation and sensitivity forecasting for a resonant optomechanical
vector dark-matter search: noise budgets, coupling exclusion curves,
integration-time statistics, synthetic injection/recovery, and scan
planning for stressed-membrane accelerometers."""

from .constants import SECONDS_PER_YEAR
from .dmfield import (DmModel, DmSignalAmplitude, coherence_time,
                      compton_frequency, de_broglie_wavelength, lorentzian_psd,
                      mass_from_frequency, sample_signal, signal_amplitude)
from .errors import ConfigError, InfeasibleError, UnresolvedResonanceError
from .estimator import (PeriodogramEstimate, Regime, SensitivityPoint, g_min,
                        g_min_thermal_floor, noise_floor_sigma, periodogram,
                        sensitivity_curve)
from .materials import (BERYLLIUM, ISOTOPES, SILICON_NITRIDE, Composition,
                        CouplingChannel, DmForceScale, Isotope, charge_per_amu,
                        dm_force_scale, gradient_suppression,
                        load_isotope_table, suppression_factor)
from .membrane import (FUNDAMENTAL, MembraneSpec, ModeData, ModeIndex,
                       enumerate_modes, mode_frequency, mode_shape,
                       overlap_factor, susceptibility)
from .montecarlo import (RecoveryResult, SimulationConfig, recover,
                         scaling_experiment, synthesize_output)
from .noisebudget import (FrequencyGrid, NoiseBudget, OpticalReadout,
                          backaction_psd, build_grid, compute_budget,
                          detection_bandwidth, detector_noise_psd,
                          imprecision_psd, multimode_effective_noise, sql_psd,
                          thermal_psd, total_displacement_psd)
from .runconfig import RunConfig, load_config
from .scanplan import (CampaignSummary, ScanPlan, ScanStep,
                       plan_array_campaign, plan_scan, plan_timed_scan)

__version__ = "0.1.0"
