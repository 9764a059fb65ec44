import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracle_values as gv
from optodm.constants import HBAR
from optodm.errors import UnresolvedResonanceError
from optodm.membrane import (FUNDAMENTAL, MembraneSpec, ModeIndex,
                             enumerate_modes, mode_frequency)
from optodm.noisebudget import (FrequencyGrid, OpticalReadout, backaction_psd,
                                build_grid, compute_budget,
                                detection_bandwidth, detector_noise_psd,
                                imprecision_psd, multimode_effective_noise,
                                sql_psd, thermal_psd, total_displacement_psd)


def test_readout_validation():
    with pytest.raises(ValueError):
        OpticalReadout(power_w=0.0)
    with pytest.raises(ValueError):
        OpticalReadout(efficiency=1.5)
    with pytest.raises(ValueError):
        OpticalReadout(finesse=0.0)


def test_noise_level_goldens(spec10, readout):
    w11 = mode_frequency(spec10, FUNDAMENTAL)
    s_imp = imprecision_psd(readout)
    assert s_imp == pytest.approx(gv.S_IMP_03MW, rel=1e-12)
    assert math.sqrt(s_imp) == pytest.approx(gv.SQRT_S_IMP_03MW, rel=1e-12)
    assert backaction_psd(spec10.effective_mass, s_imp) == pytest.approx(
        gv.S_BA_10CM, rel=1e-12)
    assert thermal_psd(spec10, w11) == pytest.approx(gv.S_TH_10CM, rel=1e-12)
    assert sql_psd(spec10, FUNDAMENTAL, w11) == pytest.approx(
        gv.SQL_RESONANCE_10CM, rel=1e-12)


def test_imprecision_scalings(readout):
    s0 = imprecision_psd(readout)
    double_p = OpticalReadout(power_w=2 * readout.power_w)
    assert imprecision_psd(double_p) == pytest.approx(s0 / 2.0, rel=1e-12)
    double_f = OpticalReadout(finesse=2 * readout.finesse)
    assert imprecision_psd(double_f) == pytest.approx(s0 / 4.0, rel=1e-12)


@given(st.floats(min_value=1e-9, max_value=10.0))
def test_heisenberg_pair_product(power_w):
    spec = MembraneSpec()
    s_imp = imprecision_psd(OpticalReadout(power_w=power_w))
    s_ba = backaction_psd(spec.effective_mass, s_imp)
    assert s_imp * s_ba == pytest.approx(
        HBAR**2 / spec.effective_mass**2, rel=1e-12)


@given(st.floats(min_value=1e-7, max_value=1.0),
       st.floats(min_value=1e3, max_value=1e5))
def test_detector_noise_above_sql(power_w, omega):
    # AM-GM: S_imp/|chi|^2 + S_ba >= 2 sqrt(S_imp S_ba)/|chi| = S_SQL
    spec = MembraneSpec()
    readout = OpticalReadout(power_w=power_w)
    det = detector_noise_psd(spec, readout, FUNDAMENTAL, omega)
    assert det >= sql_psd(spec, FUNDAMENTAL, omega) * (1.0 - 1e-12)


def test_sql_reached_at_matched_power(spec10):
    # at the power where S_imp = hbar |chi(omega0)| / m the quantum terms
    # add up to exactly the SQL on resonance
    w11 = mode_frequency(spec10, FUNDAMENTAL)
    chi0 = spec10.q0 / w11**2
    target = HBAR * chi0 / spec10.effective_mass
    p_star = gv.S_IMP_03MW * 0.3e-3 / target  # S_imp scales as 1/P
    readout = OpticalReadout(power_w=p_star)
    s_imp = imprecision_psd(readout)
    quantum = s_imp / chi0**2 + backaction_psd(spec10.effective_mass, s_imp)
    assert quantum == pytest.approx(sql_psd(spec10, FUNDAMENTAL, w11), rel=1e-9)


def test_budget_additivity(spec10, readout):
    budget = compute_budget(spec10, readout)
    assert np.allclose(budget.sxx_tot,
                       budget.sxx_imp + budget.sxx_th + budget.sxx_ba,
                       rtol=1e-12)
    direct = total_displacement_psd(spec10, readout, FUNDAMENTAL,
                                    budget.omega_rad_s)
    assert np.allclose(budget.sxx_tot, direct, rtol=1e-12)
    assert np.all(budget.saa_det >= budget.saa_sql * (1 - 1e-12))


def test_displacement_psd_with_signal_term(spec10, readout):
    w11 = mode_frequency(spec10, FUNDAMENTAL)
    base = total_displacement_psd(spec10, readout, FUNDAMENTAL, w11)
    s_dm = 1e-22
    lifted = total_displacement_psd(spec10, readout, FUNDAMENTAL, w11,
                                    s_aa_dm=s_dm)
    chi0 = spec10.q0 / w11**2
    assert lifted - base == pytest.approx(chi0**2 * s_dm, rel=1e-9)


@pytest.mark.parametrize("side_m,power_w,golden", [
    (0.20, 0.3e-3, gv.DW_DET_20CM_03MW),
    (0.20, 0.1e-3, gv.DW_DET_20CM_01MW),
    (0.10, 0.1e-3, gv.DW_DET_10CM_01MW),
    (0.10, 0.3e-3, gv.DW_DET_10CM_03MW)])
def test_detection_bandwidth_goldens(side_m, power_w, golden):
    spec = MembraneSpec(side_m=side_m)
    width = detection_bandwidth(spec, OpticalReadout(power_w=power_w))
    assert width == pytest.approx(golden, rel=5e-3)


def test_detection_bandwidth_fractional_window(spec10, readout):
    w11 = mode_frequency(spec10, FUNDAMENTAL)
    frac = detection_bandwidth(spec10, readout) / w11
    assert 1e-4 / (2 * math.pi) < frac < 1e-2  # narrow but resolvable band


def test_detection_bandwidth_grows_with_power(spec10):
    widths = [detection_bandwidth(spec10, OpticalReadout(power_w=p))
              for p in (0.1e-3, 0.3e-3, 1e-3)]
    assert widths[0] < widths[1] < widths[2]


def test_unresolved_resonance(spec10):
    with pytest.raises(UnresolvedResonanceError):
        detection_bandwidth(spec10, OpticalReadout(power_w=1e-15))


def test_multimode_single_mode_reduction(spec10, readout):
    modes = enumerate_modes(spec10, f_max_hz=5e3)  # fundamental only
    assert len(modes) == 1
    omega = np.linspace(0.9, 1.1, 101) * modes[0].omega_rad_s
    s_eff = multimode_effective_noise(spec10, readout, modes, omega)
    single = (detector_noise_psd(spec10, readout, FUNDAMENTAL, omega)
              / modes[0].beta**2)
    assert np.allclose(s_eff, single, rtol=1e-12)


def test_multimode_dips_at_higher_modes(spec10, readout):
    modes = enumerate_modes(spec10, f_max_hz=40e3)
    w13 = mode_frequency(spec10, ModeIndex(1, 3))
    s_full = float(multimode_effective_noise(spec10, readout, modes, w13))
    s_single = float(multimode_effective_noise(spec10, readout, modes[:1], w13))
    assert s_full < 0.1 * s_single  # the (1,3) resonance opens a deep dip


def test_multimode_even_modes_silent(spec10, readout):
    modes = enumerate_modes(spec10, f_max_hz=40e3)
    odd = [m for m in modes if m.beta != 0.0]
    w = np.geomspace(2e4, 2e5, 400)
    assert np.allclose(
        multimode_effective_noise(spec10, readout, modes, w),
        multimode_effective_noise(spec10, readout, odd, w), rtol=1e-12)
    with pytest.raises(ValueError):
        even = [m for m in modes if m.beta == 0.0]
        multimode_effective_noise(spec10, readout, even, w)


def test_grid_validation():
    with pytest.raises(ValueError):
        FrequencyGrid(f_min_hz=0.0)
    with pytest.raises(ValueError):
        FrequencyGrid(f_min_hz=2e3, f_max_hz=1e3)
    with pytest.raises(ValueError):
        FrequencyGrid(points_per_decade=1)


def test_build_grid_properties(spec10):
    w11 = mode_frequency(spec10, FUNDAMENTAL)
    grid = FrequencyGrid(f_min_hz=1e3, f_max_hz=30e3)
    omega = build_grid(grid, spec=spec10)
    assert np.all(np.diff(omega) > 0)
    assert omega[0] >= 2 * math.pi * 1e3 and omega[-1] <= 2 * math.pi * 30e3
    assert np.min(np.abs(omega - w11)) == 0.0  # exact peak present
    # refinement resolves the linewidth: finest spacing near the peak is
    # far below the linewidth, base log spacing is far above it
    near = np.abs(omega - w11) < 5 * w11 / spec10.q0
    assert near.sum() > 20
    assert np.min(np.diff(omega[near])) < w11 / spec10.q0
    coarse = build_grid(FrequencyGrid(f_min_hz=1e3, f_max_hz=30e3,
                                      refine=False))
    assert np.min(np.abs(coarse - w11)) > 10 * w11 / spec10.q0


def test_budget_on_explicit_grid(spec10, readout):
    omega = np.array([2e4, 25233.8, 3e4])
    budget = compute_budget(spec10, readout, omega=omega)
    assert np.array_equal(budget.omega_rad_s, omega)
    assert np.allclose(budget.f_hz, omega / (2 * math.pi))
