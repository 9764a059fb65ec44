import math

import pytest
from hypothesis import given, strategies as st

import oracle_values as gv
from optodm.materials import (BERYLLIUM, ISOTOPES, SILICON_NITRIDE,
                              Composition, CouplingChannel, Isotope,
                              charge_per_amu, dm_force_scale,
                              gradient_suppression, load_isotope_table,
                              suppression_factor)

BL = CouplingChannel.B_MINUS_L
B = CouplingChannel.B


def test_isotope_validation():
    with pytest.raises(ValueError):
        Isotope("X", 0, 1, 1.0)
    with pytest.raises(ValueError):
        Isotope("X", 3, 2, 2.0)          # Z > A
    with pytest.raises(ValueError):
        Isotope("X", 2, 4, 4.5)          # mass too far from A
    iso = ISOTOPES["Be-9"]
    assert iso.neutrons == 5


def test_composition_validation():
    with pytest.raises(ValueError):
        Composition("empty", ())
    with pytest.raises(ValueError):
        Composition("bad", ((ISOTOPES["Be-9"], 0.0),))


def test_channel_parse():
    assert CouplingChannel.parse("b-minus-l") is BL
    assert CouplingChannel.parse(" B ") is B
    with pytest.raises(ValueError):
        CouplingChannel.parse("lepton")


def test_charge_per_amu_goldens():
    assert charge_per_amu(BERYLLIUM, BL) == pytest.approx(gv.CPA_BE9_BL, rel=1e-12)
    assert charge_per_amu(SILICON_NITRIDE, BL) == pytest.approx(
        gv.CPA_SI3N4_BL, rel=1e-12)
    assert charge_per_amu(BERYLLIUM, B) == pytest.approx(gv.CPA_BE9_B, rel=1e-12)
    assert charge_per_amu(SILICON_NITRIDE, B) == pytest.approx(
        gv.CPA_SI3N4_B, rel=1e-12)


def test_suppression_factor_goldens():
    assert suppression_factor(SILICON_NITRIDE, BERYLLIUM, BL) == pytest.approx(
        gv.F12_BL, rel=1e-12)
    assert suppression_factor(SILICON_NITRIDE, BERYLLIUM, B) == pytest.approx(
        gv.F12_B, rel=1e-12)


def test_b_channel_needs_true_masses():
    # with masses rounded to A the B-channel difference collapses to zero
    rounded = {sym: Isotope(sym, iso.z, iso.a, float(iso.a))
               for sym, iso in ISOTOPES.items()}
    si3n4 = Composition("Si3N4r", ((rounded["Si-28"], 3.0),
                                   (rounded["N-14"], 4.0)))
    be = Composition("Ber", ((rounded["Be-9"], 1.0),))
    assert suppression_factor(si3n4, be, B) == pytest.approx(0.0, abs=1e-15)
    assert suppression_factor(si3n4, be, B) < 0.01 * gv.F12_B


def test_force_scale_goldens():
    scale = dm_force_scale(0.4)
    assert scale.force_n == pytest.approx(gv.F0_N, rel=1e-12)
    assert scale.acceleration_m_s2 == pytest.approx(gv.A0_M_S2, rel=1e-12)


def test_force_scale_scaling():
    # F0 ~ sqrt(rho)
    assert dm_force_scale(1.6).force_n == pytest.approx(
        2.0 * dm_force_scale(0.4).force_n, rel=1e-12)
    with pytest.raises(ValueError):
        dm_force_scale(0.0)


def test_gradient_suppression_golden():
    assert gradient_suppression(0.1, gv.LAMBDA_10KHZ_M) == pytest.approx(
        gv.GRAD_SUPPRESSION_10CM, rel=1e-12)
    assert gradient_suppression(0.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        gradient_suppression(-0.1, 1.0)
    with pytest.raises(ValueError):
        gradient_suppression(0.1, 0.0)


_iso_strategy = st.sampled_from(sorted(ISOTOPES.values(), key=lambda i: i.symbol))
_comp_strategy = st.builds(
    lambda pairs: Composition("h", tuple(pairs)),
    st.lists(st.tuples(_iso_strategy,
                       st.floats(min_value=0.1, max_value=10.0,
                                 allow_nan=False)),
             min_size=1, max_size=4))


@given(_comp_strategy, _comp_strategy, st.sampled_from([BL, B]))
def test_suppression_symmetric_nonnegative(c1, c2, channel):
    f_ab = suppression_factor(c1, c2, channel)
    assert f_ab >= 0.0
    assert f_ab == suppression_factor(c2, c1, channel)
    assert suppression_factor(c1, c1, channel) == 0.0


@given(_comp_strategy)
def test_bl_charge_per_amu_below_one(comp):
    # neutrons per amu stays under 1 for real nuclides
    assert 0.0 <= charge_per_amu(comp, BL) < 1.0


def test_isotope_table_roundtrip(tmp_path):
    path = tmp_path / "iso.txt"
    path.write_text("# custom table\n"
                    "Cu-63 29 63 62.929597  # copper\n"
                    "Al-27 13 27 26.981538\n")
    table = load_isotope_table(path)
    assert set(table) == {"Cu-63", "Al-27"}
    assert table["Cu-63"].neutrons == 34


def test_isotope_table_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("Cu-63 29 63\n")
    with pytest.raises(ValueError, match="4 columns"):
        load_isotope_table(bad)
    dup = tmp_path / "dup.txt"
    dup.write_text("Cu-63 29 63 62.929597\nCu-63 29 63 62.929597\n")
    with pytest.raises(ValueError, match="duplicate"):
        load_isotope_table(dup)
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    with pytest.raises(ValueError, match="no isotopes"):
        load_isotope_table(empty)
