import math
import warnings
from collections import defaultdict
from fractions import Fraction

import numpy as np
import pytest
import scipy.constants as sc
from hypothesis import given, settings, strategies as st

from hydroquad import Level, Method, get_constants
from hydroquad.errors import DomainError, SelectionRuleError
from hydroquad.kepler import eccentricity, fourier_triple
from hydroquad.semiclassical import (
    branching_fractions,
    e1_prefactor,
    e1_rate_fourier,
    e1_rate_rescaled,
    e1_reduced_rate,
    e2_prefactor,
    e2_rate_fourier,
    e2_rate_rescaled,
    e2_reduced_rate,
    rescaled_index,
    scl_branching_table,
)
from hydroquad.specfun import precision


def test_prefactors_from_codata():
    w = sc.m_e * sc.c**2 / sc.hbar
    a = sc.fine_structure
    assert e2_prefactor(3) == pytest.approx(6.52, abs=0.005)
    assert e2_prefactor(3) == pytest.approx(a**7 * w / (60 * 3**7), rel=1e-8)
    assert e2_prefactor(3, Z=2) == pytest.approx(64 * e2_prefactor(3))
    assert e1_prefactor(2) == pytest.approx(2 * a**5 * w / (3 * 32), rel=1e-8)


def test_circular_reduced_rates():
    assert e2_reduced_rate(2, 0.0, -2) == 48.0
    for k in range(1, 12):
        for dl in (-2, 0, 2):
            if (k, dl) != (2, -2):
                assert e2_reduced_rate(k, 0.0, dl) == 0.0
    assert e1_reduced_rate(1, 0.0, -1) == 1.0
    assert e1_reduced_rate(1, 0.0, 1) == 0.0
    assert e1_reduced_rate(4, 0.0, -1) == 0.0
    with pytest.raises(DomainError):
        e1_reduced_rate(0.5, 0.0, -1)


def test_circular_limit_is_continuous():
    # approaching the circle from eccentric orbits reproduces the analytic limits
    assert e2_reduced_rate(2, 1e-7, -2) == pytest.approx(48.0, rel=1e-6)
    assert e1_reduced_rate(1, 1e-7, -1) == pytest.approx(1.0, rel=1e-6)
    assert e1_reduced_rate(1, 1e-7, 1) == pytest.approx(0.0, abs=1e-12)
    assert e2_reduced_rate(3, 1e-7, 0) < 1e-20


def test_reduced_rate_matches_triple():
    eps, k = 0.7, 6
    t = fourier_triple(k, eps)
    assert e2_reduced_rate(k, eps, 0) == pytest.approx(k**5 / 4 * (t.A + t.B) ** 2, rel=1e-12)
    assert e2_reduced_rate(k, eps, -2) == pytest.approx(3 * k**5 / 8 * (t.A - t.B + 2 * t.C) ** 2, rel=1e-12)
    assert e2_reduced_rate(k, eps, 2) == pytest.approx(3 * k**5 / 8 * (t.A - t.B - 2 * t.C) ** 2, rel=1e-12)


def test_e1_formula_against_scipy_bessel():
    from scipy.special import jv, jvp

    for k, eps in [(1, 0.5), (3, 0.8), (2.7, 0.3)]:
        x = k * eps
        r = math.sqrt(eps**-2 - 1)
        assert e1_reduced_rate(k, eps, -1) == pytest.approx(k * (jvp(k, x) + r * jv(k, x)) ** 2, rel=1e-10)
        assert e1_reduced_rate(k, eps, 1) == pytest.approx(k * (jvp(k, x) - r * jv(k, x)) ** 2, rel=1e-9)


@settings(max_examples=150, deadline=None)
@given(k=st.integers(1, 60), eps=st.floats(1e-3, 0.74))
def test_sign_convention_lock(k, eps):
    # angular-momentum-lowering dominance: (A - B) C >= 0
    down = e2_reduced_rate(k, eps, -2)
    up = e2_reduced_rate(k, eps, 2)
    assert down >= up * (1 - 1e-12)


def test_sign_lock_exception_band():
    # Near the zero of A - B + 2C the raising channel wins at that single harmonic.
    # The band is narrow, sits above eps ~ 0.75 and is confirmed by quadrature.
    from hydroquad.kepler import fourier_oracle

    o = fourier_oracle(5, 0.9375)
    assert (o.A - o.B + 2 * o.C) ** 2 < (o.A - o.B - 2 * o.C) ** 2
    assert e2_reduced_rate(5, 0.9375, -2) < e2_reduced_rate(5, 0.9375, 2)
    # summed over harmonics the lowering channel still dominates
    for n, l in [(30, 15), (20, 3), (12, 8)]:
        eps = eccentricity(n, l)
        down = math.fsum(e2_reduced_rate(k, eps, -2) for k in range(1, 200))
        up = math.fsum(e2_reduced_rate(k, eps, 2) for k in range(1, 200))
        assert down > up


@settings(max_examples=60, deadline=None)
@given(k=st.floats(0.1, 40), eps=st.floats(1e-3, 0.99), dl=st.sampled_from([-2, 0, 2]))
def test_rates_finite_and_nonnegative(k, eps, dl):
    v = e2_reduced_rate(k, eps, dl)
    assert math.isfinite(v) and v >= 0


def test_channel_validation():
    with pytest.raises(SelectionRuleError):
        e2_reduced_rate(2, 0.5, 1)
    with pytest.raises(SelectionRuleError):
        e1_reduced_rate(2, 0.5, 0)
    with pytest.raises(SelectionRuleError):
        e2_rate_fourier(Level(3, 2), 2, -1)


def test_fourier_rate_record():
    level = Level(30, 15)
    r = e2_rate_fourier(level, 13, -2)
    assert r.rate > 0 and math.isfinite(r.rate)
    assert r.method is Method.FOURIER
    from hydroquad.kepler import orbit_from_level

    assert r.omega == pytest.approx(13 * orbit_from_level(level).omega)
    e1 = e1_rate_fourier(Level(2, 1), 1, -1)
    assert e1.multipole == "E1" and e1.rate > 0


def test_rescaled_index_values():
    assert rescaled_index(30, 13) == pytest.approx(15 * ((30 / 17) ** 2 - 1), rel=1e-15)
    assert rescaled_index(30, 13) == pytest.approx(31.713, abs=5e-4)
    assert rescaled_index(3, 2) == 12.0
    for n in (10**3, 10**5):
        assert rescaled_index(n, 1) == pytest.approx(1.0, rel=2 / n)
        assert rescaled_index(n, 5) == pytest.approx(5.0, rel=20 / n)
    with pytest.raises(DomainError):
        rescaled_index(5, 5)
    with pytest.raises(DomainError):
        rescaled_index(5, 0)


@given(n=st.integers(2, 300), data=st.data())
def test_rescaled_frequency_matches_balmer(n, data):
    dn = data.draw(st.integers(1, n - 1))
    # k Omega_n equals the Rydberg difference: k / n^3 = (1/(n-dn)^2 - 1/n^2) / 2
    k = Fraction(n * dn * (2 * n - dn), 2 * (n - dn) ** 2)
    assert k / n**3 == (Fraction(1, (n - dn) ** 2) - Fraction(1, n**2)) / 2
    assert rescaled_index(n, dn) == pytest.approx(float(k), rel=1e-15)


@pytest.mark.parametrize("label,dn,dl,printed,unit", [
    ((3, 2), 2, -2, 201.0, 1.0),
    ((5, 4), 1, -2, 0.85, 0.01),
    ((6, 2), 1, 2, 2.1e-2, 1e-3),
])
def test_rescaled_published_values(label, dn, dl, printed, unit):
    r = e2_rate_rescaled(Level(*label), dn, dl)
    assert abs(r.rate - printed) <= 2 * unit
    assert r.method is Method.RESCALED
    assert r.final == Level(label[0] - dn, label[1] + dl)


def test_rescaled_reports_balmer_frequency():
    r = e2_rate_rescaled(Level(30, 15), 13, -2)
    assert r.frequency / 1e12 == pytest.approx(7.73, abs=0.01)
    rydberg_hz = sc.physical_constants["Rydberg constant times c in Hz"][0]
    assert r.frequency == pytest.approx(rydberg_hz * (1 / 17**2 - 1 / 30**2), rel=1e-9)


def test_rescaled_weight_and_fourier_relation():
    level = Level(7, 2)
    for dn in (1, 2, 4):
        k = rescaled_index(7, dn)
        fourier = e2_rate_fourier(level, k, 0).rate
        assert e2_rate_rescaled(level, dn, 0).rate == pytest.approx(fourier * (7 / (7 - dn)) ** 3, rel=1e-12)


@pytest.mark.parametrize("dl", [0, 2])
def test_rescaled_approaches_fourier(dl):
    # relative difference shrinks like dn / n with a stable coefficient
    coeffs = []
    for n in (100, 400):
        level = Level(n, n // 2)
        for dn in (1, 2, 3):
            a = e2_rate_rescaled(level, dn, dl).rate
            b = e2_rate_fourier(level, dn, dl).rate
            rel = abs(a / b - 1)
            assert rel <= 4 * dn / n
            coeffs.append(rel * n / dn)
    assert max(coeffs) - min(coeffs) < 1.5


def test_unphysical_final_states():
    with pytest.raises(SelectionRuleError):
        e2_rate_rescaled(Level(3, 2), 2, 0)      # 1d does not exist
    with pytest.raises(SelectionRuleError):
        e2_rate_rescaled(Level(3, 0), 1, -2)     # negative l'
    with pytest.raises(DomainError):
        e2_rate_rescaled(Level(3, 2), 3, -2)     # dn >= n
    with pytest.raises(DomainError):
        e1_rate_rescaled(Level(2, 1), 2, -1)


def test_near_cancellation_between_two_and_four():
    eps = eccentricity(30, 15)
    ks = np.linspace(2, 4, 201)
    combo = np.array([(lambda t: t.A - t.B + 2 * t.C)(fourier_triple(k, eps)) for k in ks])
    changes = np.nonzero(np.diff(np.sign(combo)))[0]
    assert len(changes) == 1
    k_c = ks[changes[0]]
    assert 2 < k_c < 4 and not float(k_c).is_integer()


def test_e1_2p_rescaled_near_quantum_lifetime():
    r = e1_rate_rescaled(Level(2, 1), 1, -1)
    assert 6.27e8 / 2 <= r.rate <= 6.27e8 * 2
    assert r.multipole == "E1"


def test_e1_rescaled_warns_for_s_states():
    with pytest.warns(UserWarning, match="l = 0"):
        e1_rate_rescaled(Level(3, 0), 1, 1)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        e1_rate_rescaled(Level(3, 1), 1, -1)


# ----------------------------------------------------------------- branching


def test_branching_fractions_normalization():
    level = Level(6, 3)
    table = scl_branching_table(level)
    for method in (Method.FOURIER, Method.RESCALED):
        pct = [b.percent for b in table.by_method(method)]
        assert math.fsum(pct) == pytest.approx(100.0, abs=1e-9)
    assert not table.truncated
    assert table.k_max <= 10 * level.n**2
    fourier_total = math.fsum(b.record.rate for b in table.by_method(Method.FOURIER))
    assert table.tail_estimate < 1e-12 * fourier_total
    ks = sorted({b.record.order for b in table.by_method(Method.FOURIER)})
    assert ks == list(range(1, table.k_max + 1))


def test_branching_all_denominator_includes_e1():
    level = Level(6, 3)
    table = scl_branching_table(level, denominator="all")
    mps = {b.record.multipole for b in table.by_method(Method.RESCALED)}
    assert mps == {"E1", "E2"}
    e2_only = scl_branching_table(level)
    e2_share = math.fsum(b.percent for b in table.by_method(Method.RESCALED) if b.record.multipole == "E2")
    assert e2_share < 1.0  # E2 is orders of magnitude weaker than E1
    assert math.fsum(b.percent for b in e2_only.by_method(Method.RESCALED)) == pytest.approx(100, abs=1e-9)


def test_branching_argument_errors():
    with pytest.raises(DomainError):
        scl_branching_table(Level(3, 2), channel="E1")
    with pytest.raises(DomainError):
        scl_branching_table(Level(3, 2), denominator="bogus")


def test_branching_truncation_is_flagged():
    with precision(max_digits=60):
        with pytest.warns(UserWarning, match="truncated"):
            table = scl_branching_table(Level(30, 15))
    assert table.truncated
    assert table.k_max < 30
    # rescaled channels past the cap are dropped, the rest keep their normalization
    orders = {b.record.order for b in table.by_method(Method.RESCALED)}
    assert 1 in orders and 13 not in orders
    assert math.fsum(b.percent for b in table.by_method(Method.RESCALED)) == pytest.approx(100, abs=1e-9)


def test_branching_fractions_zero_total():
    r = e2_rate_fourier(Level(3, 2), 1, 0)
    zero = r.__class__(**{**r.__dict__, "rate": 0.0})
    assert [b.percent for b in branching_fractions([zero])] == [0.0]


@pytest.fixture(scope="module")
def table_30_15():
    return scl_branching_table(Level(30, 15))


def test_rescaled_branching_shape_30_15(table_30_15):
    per_dn = defaultdict(float)
    for b in table_30_15.by_method(Method.RESCALED):
        per_dn[b.record.order] += b.percent
    assert per_dn[3] < per_dn[2] and per_dn[3] < per_dn[4]
    peak = max(per_dn, key=per_dn.get)
    assert peak == 13
    freq = next(b.record.frequency for b in table_30_15.by_method(Method.RESCALED) if b.record.order == peak)
    assert 6e12 <= freq <= 8e12


def test_fourier_series_converges_30_15(table_30_15):
    assert not table_30_15.truncated
    k_star = 30 / (1 - eccentricity(30, 15))
    assert k_star < table_30_15.k_max <= 9000
