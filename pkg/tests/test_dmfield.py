import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

import oracle_values as gv
from optodm.dmfield import (DmModel, coherence_time, compton_frequency,
                            de_broglie_wavelength, lorentzian_psd,
                            mass_from_frequency, sample_signal,
                            signal_amplitude)


def test_compton_frequency_golden():
    assert compton_frequency(gv.MASS_10KHZ_EV) == pytest.approx(
        2.0 * math.pi * 1e4, rel=1e-12)
    assert mass_from_frequency(2.0 * math.pi * 1e4) == pytest.approx(
        gv.MASS_10KHZ_EV, rel=1e-12)


def test_de_broglie_golden():
    assert de_broglie_wavelength(gv.MASS_10KHZ_EV) == pytest.approx(
        gv.LAMBDA_10KHZ_M, rel=1e-12)


def test_coherence_time_golden():
    mass = mass_from_frequency(gv.OMEGA11_10CM)
    assert coherence_time(mass, 5e5) == pytest.approx(gv.TAU_DM_10CM, rel=1e-12)


def test_model_validation():
    with pytest.raises(ValueError):
        DmModel(mass_ev=0.0)
    with pytest.raises(ValueError):
        DmModel(mass_ev=1e-11, q_dm=0.5)
    with pytest.raises(ValueError):
        DmModel(mass_ev=1e-11, v_vir=1.5)
    dm = DmModel.from_frequency(2.0 * math.pi * 1e4)
    assert dm.omega_dm == pytest.approx(2.0 * math.pi * 1e4, rel=1e-12)


def test_amplitude_composition():
    amp = signal_amplitude(g=2e-22, f12=0.05, beta=-1.6, a0=3.6e11)
    assert amp.a_dm == pytest.approx(1.6 * 2e-22 * 0.05 * 3.6e11 / math.sqrt(3))
    assert amp.a_dm >= 0.0
    with pytest.raises(ValueError):
        signal_amplitude(g=-1.0, f12=0.05, beta=1.0, a0=3.6e11)


def _unit_amp():
    # components chosen so a_dm = 1
    return signal_amplitude(g=math.sqrt(3.0), f12=1.0, beta=1.0, a0=1.0)


def test_lorentzian_peak_and_integral():
    dm = DmModel.from_frequency(2.0 * math.pi * 200.0, q_dm=300.0)
    amp = _unit_amp()
    tau = dm.tau_dm
    peak = lorentzian_psd(dm.omega_dm, amp, dm)
    assert peak == pytest.approx(amp.a_dm**2 * tau, rel=1e-12)
    # quadrature oracle: integral over f of the line is a_dm^2/2
    total, _ = integrate.quad(
        lambda w: lorentzian_psd(w, amp, dm) / (2.0 * math.pi),
        0.0, 40.0 * dm.omega_dm, points=[dm.omega_dm], limit=400)
    assert total == pytest.approx(amp.a_dm**2 / 2.0, rel=1e-3)


@given(st.floats(min_value=1e-3, max_value=500.0))  # keeps omega - delta > 0
def test_lorentzian_symmetric(detune_scale):
    dm = DmModel.from_frequency(2.0 * math.pi * 200.0, q_dm=300.0)
    amp = _unit_amp()
    delta = detune_scale / dm.tau_dm
    lo = lorentzian_psd(dm.omega_dm - delta, amp, dm)
    hi = lorentzian_psd(dm.omega_dm + delta, amp, dm)
    assert lo == pytest.approx(hi, rel=1e-9)
    assert lo <= lorentzian_psd(dm.omega_dm, amp, dm)


def test_sample_signal_deterministic():
    dm = DmModel.from_frequency(2.0 * math.pi * 200.0, q_dm=300.0)
    amp = _unit_amp()
    a1 = sample_signal(amp, dm, 2.0, 2048.0, seed=11)
    a2 = sample_signal(amp, dm, 2.0, 2048.0, seed=11)
    a3 = sample_signal(amp, dm, 2.0, 2048.0, seed=12)
    assert np.array_equal(a1, a2)
    assert not np.array_equal(a1, a3)
    assert len(a1) == 4096
    assert np.max(np.abs(a1)) <= amp.a_dm + 1e-12


def test_sample_signal_nyquist_guard():
    dm = DmModel.from_frequency(2.0 * math.pi * 200.0, q_dm=300.0)
    with pytest.raises(ValueError, match="carrier"):
        sample_signal(_unit_amp(), dm, 1.0, 300.0, seed=0)


def test_sample_signal_mean_square():
    # <a^2> = a_dm^2/2 over many coherence times
    dm = DmModel.from_frequency(2.0 * math.pi * 200.0, q_dm=300.0)
    amp = _unit_amp()
    a = sample_signal(amp, dm, 200.0 * dm.tau_dm, 2048.0, seed=3)
    assert np.mean(a**2) == pytest.approx(0.5 * amp.a_dm**2, rel=0.05)


def test_sample_signal_decorrelates():
    # autocorrelation falls like exp(-|t|/tau) under the envelope
    dm = DmModel.from_frequency(2.0 * math.pi * 200.0, q_dm=50.0)
    amp = _unit_amp()
    fs = 2048.0
    a = sample_signal(amp, dm, 400.0 * dm.tau_dm, fs, seed=5)
    period_lag = int(round(fs / 200.0))  # one carrier period: cos factor ~ 1
    lag = period_lag * int(round(dm.tau_dm * 200.0))  # about one tau
    r0 = np.mean(a * a)
    r_tau = np.mean(a[:-lag] * a[lag:])
    expected = math.exp(-lag / fs / dm.tau_dm) * math.cos(
        dm.omega_dm * lag / fs)
    assert r_tau / r0 == pytest.approx(expected, abs=0.1)
