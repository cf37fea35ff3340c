import math
from fractions import Fraction

import pytest
import scipy.constants as sc
from hypothesis import given, strategies as st

from hydroquad import ChannelRate, Level, Method, get_constants
from hydroquad.constants import PROFILES
from hydroquad.errors import DomainError
from hydroquad.levels import L_LETTERS, format_label, l_from_letter, l_letter, parse_label


@pytest.mark.parametrize("label,nl", [("1s", (1, 0)), ("3d", (3, 2)), ("9h", (9, 5)), ("8k", (8, 7)),
                                      ("7i", (7, 6)), ("10l", (10, 8)), (" 4F ", (4, 3))])
def test_parse_label(label, nl):
    assert parse_label(label) == nl


def test_letters_skip_j():
    assert "j" not in L_LETTERS
    assert L_LETTERS[:10] == "spdfghiklm"
    assert len(set(L_LETTERS)) == len(L_LETTERS) == 21


@pytest.mark.parametrize("bad", ["", "d3", "3", "3j", "3dd", "-3d", "3 d x"])
def test_parse_label_errors(bad):
    with pytest.raises(ValueError):
        parse_label(bad)


@given(n=st.integers(1, 500), l=st.integers(0, 20))
def test_label_round_trip(n, l):
    assert parse_label(format_label(n, l)) == (n, l)
    assert l_from_letter(l_letter(l)) == l


def test_letter_range():
    with pytest.raises(DomainError):
        l_letter(21)


def test_level_validation():
    assert Level(3, 2).label == "3d"
    assert Level(3, 2, j=2.5).j == Fraction(5, 2)
    assert str(Level(3, 2, m=-1, j=Fraction(3, 2))) == "3d_3/2(m=-1)"
    for kwargs in [dict(n=0, l=0), dict(n=2, l=2), dict(n=2, l=-1), dict(n=3, l=1, m=2),
                   dict(n=3, l=1, j=2.5), dict(n=1, l=0, j=-0.5), dict(n=2, l=1, Z=0),
                   dict(n=2.0, l=1), dict(n=True, l=0)]:
        with pytest.raises(DomainError):
            Level(**kwargs)


def test_domain_error_is_value_error():
    with pytest.raises(ValueError):
        Level(1, 1)


def test_channel_rate_invariants():
    lv = Level(3, 2)
    with pytest.raises(DomainError):
        ChannelRate(lv, 2, -2, 1.0, -1.0, Method.QUANTUM)
    with pytest.raises(DomainError):
        ChannelRate(lv, 2, -2, 1.0, math.nan, Method.QUANTUM)
    with pytest.raises(DomainError):
        ChannelRate(lv, 2, 1, 1.0, 5.0, Method.QUANTUM)
    zero = ChannelRate(lv, 1, -1, 1.0, 0.0, Method.QUANTUM)
    assert zero.delta_n == 1
    assert ChannelRate(lv, 3, 0, 2 * math.pi, 1.0, Method.FOURIER).delta_n is None
    assert ChannelRate(lv, 3, 0, 2 * math.pi, 1.0, Method.FOURIER).frequency == pytest.approx(1.0)
    assert ChannelRate(lv, 1, 1, 1.0, 3.0, Method.RESCALED, multipole="E1").rate == 3.0


@pytest.mark.parametrize("name", sorted(PROFILES))
def test_profiles_consistent(name):
    c = get_constants(name)
    assert max(c.consistency_errors().values()) <= 1e-12
    assert all(v > 0 for v in (c.alpha, c.electron_mass, c.c, c.hbar, c.elementary_charge))


def test_default_profile_matches_scipy_codata():
    # scipy ships CODATA 2018 up to 1.14 and 2022 afterwards; match whichever it carries
    c = get_constants("codata2018") if abs(sc.fine_structure - 7.2973525693e-3) < 1e-16 else get_constants("codata2022")
    assert c.alpha == pytest.approx(sc.fine_structure, rel=1e-15)
    assert c.electron_mass == pytest.approx(sc.m_e, rel=1e-15)
    assert c.bohr_radius == pytest.approx(sc.physical_constants["Bohr radius"][0], rel=1e-9)
    assert c.mec2_over_hbar == pytest.approx(7.76344e20, rel=1e-5)
    assert c.coulomb_e2 == pytest.approx(sc.e**2 / (4 * math.pi * sc.epsilon_0), rel=1e-9)
    assert c.hartree_over_hbar == pytest.approx(sc.physical_constants["Hartree energy"][0] / sc.hbar, rel=1e-9)


def test_perturbed_profile_detected():
    c = get_constants().with_overrides(bohr_radius_override=get_constants().bohr_radius * (1 + 1e-6))
    assert c.consistency_errors()["bohr_radius"] > 1e-7
    with pytest.raises(KeyError):
        get_constants("codata1900")
