import math

import numpy as np
import pytest
import scipy.constants as sc
from hypothesis import given, settings, strategies as st

from hydroquad import Level, get_constants
from hydroquad.errors import ConvergenceError, DomainError
from hydroquad.kepler import (
    OrbitGeometry,
    constant_terms,
    eccentricity,
    fourier_oracle,
    fourier_triple,
    kepler_position,
    orbit_from_level,
    solve_kepler,
)


def test_orbit_geometry_ground_state():
    c = get_constants()
    orb = orbit_from_level(Level(1, 0), c)
    assert orb.eccentricity == pytest.approx(math.sqrt(3) / 2, rel=1e-15)
    assert orb.a == pytest.approx(c.bohr_radius, rel=1e-12)
    assert orb.a == pytest.approx(sc.physical_constants["Bohr radius"][0], rel=1e-9)


def test_orbit_frequency_from_codata():
    # atomic unit of time is hbar / E_h, so Omega(n) = 1 / (n^3 t_au)
    t_au = sc.physical_constants["atomic unit of time"][0]
    orb = orbit_from_level(Level(3, 2))
    assert orb.omega == pytest.approx(1 / (27 * t_au), rel=1e-9)
    assert orb.omega == pytest.approx(1.531e15, rel=1e-3)
    assert orb.period == pytest.approx(2 * math.pi / orb.omega)


def test_orbit_z_scaling():
    h = orbit_from_level(Level(4, 2))
    he = orbit_from_level(Level(4, 2, Z=2))
    assert he.a == pytest.approx(h.a / 2)
    assert he.omega == pytest.approx(4 * h.omega)
    assert he.eccentricity == h.eccentricity


def test_eccentricity_values():
    assert eccentricity(30, 15) == pytest.approx(0.85618, abs=1e-5)
    assert eccentricity(30, 15) == pytest.approx(math.sqrt(1 - (15.5 / 30) ** 2), rel=1e-15)
    for n in range(1, 40):
        for l in range(n):
            assert 0 < eccentricity(n, l) < 1


def test_orbit_geometry_validation():
    with pytest.raises(DomainError):
        OrbitGeometry(a=1.0, omega=1.0, eccentricity=1.0)
    with pytest.raises(DomainError):
        OrbitGeometry(a=-1.0, omega=1.0, eccentricity=0.1)


def test_triple_circular_values():
    t = fourier_triple(2, 0.0)
    assert (t.A, t.B, t.C) == (0.5, -0.5, 0.5)
    assert (fourier_triple(1, 0.0).A, fourier_triple(1, 0.0).B, fourier_triple(1, 0.0).C) == (0.0, 0.0, 0.0)


@pytest.mark.parametrize("k", [1, 3, 4, 7, 25])
def test_circular_selection(k):
    t = fourier_triple(k, 0.0)
    assert (t.A, t.B, t.C) == (0.0, 0.0, 0.0)


def test_circular_non_integer_order():
    # above order 2 every term is finite at the origin; below it J_{k-2}(0) diverges
    t = fourier_triple(31.713, 0.0)
    assert (t.A, t.B, t.C) == (0.0, 0.0, 0.0)
    t = fourier_triple(2.5, 0.0)
    assert all(math.isfinite(v) for v in (t.A, t.B, t.C))
    with pytest.raises(DomainError):
        fourier_triple(1.5, 0.0)


def test_circular_orbit_oracle():
    o = fourier_oracle(2, 0.0)
    assert (o.A, o.B, o.C) == pytest.approx((0.5, -0.5, 0.5), abs=1e-14)
    assert fourier_oracle(3, 0.0).A == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("k,eps", [(3, 0.6), (5, 0.9), (1, 0.3), (17, 0.99), (40, 0.7)])
def test_triple_matches_quadrature(k, eps):
    f = fourier_triple(k, eps)
    o = fourier_oracle(k, eps)
    for a, b in ((f.A, o.A), (f.B, o.B), (f.C, o.C)):
        assert abs(a - b) <= 1e-9 * abs(b) + 1e-14


def test_oracle_independent_of_scale():
    base = fourier_oracle(4, 0.5)
    scaled = fourier_oracle(4, 0.5, a=3.0, omega=7.0)
    assert (scaled.A, scaled.B, scaled.C) == pytest.approx((base.A, base.B, base.C), rel=1e-11, abs=1e-14)


def test_triple_against_numpy_fft():
    # a third route: sample the trajectory uniformly in time and take the discrete transform
    eps, n = 0.5, 4096
    t = np.arange(n) * 2 * math.pi / n
    xy = np.array([kepler_position(eps, 1.0, 1.0, ti) for ti in t])
    x, y = xy[:, 0], xy[:, 1]
    fx2 = np.fft.rfft(x * x) * 2 / n
    fy2 = np.fft.rfft(y * y) * 2 / n
    fxy = np.fft.rfft(x * y) * 2 / n
    for k in range(1, 12):
        tr = fourier_triple(k, eps)
        assert tr.A == pytest.approx(fx2[k].real, abs=1e-12)
        assert tr.B == pytest.approx(fy2[k].real, abs=1e-12)
        assert tr.C == pytest.approx(-fxy[k].imag, abs=1e-12)
    A0, B0 = constant_terms(eps)
    # the constant terms are the time averages
    assert A0 == pytest.approx(fx2[0].real / 2, abs=1e-12)
    assert B0 == pytest.approx(fy2[0].real / 2, abs=1e-12)


def test_decay_beyond_threshold():
    eps = 0.9
    k_star = int(3 / (1 - eps))
    mags = [max(abs(v) for v in (t.A, t.B, t.C))
            for t in (fourier_triple(k, eps) for k in range(k_star, k_star + 80))]
    assert all(b < a for a, b in zip(mags, mags[1:]))
    assert mags[-1] < 0.1 * mags[0]


@settings(max_examples=60, deadline=None)
@given(k=st.floats(0.05, 60), eps=st.floats(1e-6, 0.999))
def test_triple_is_finite(k, eps):
    t = fourier_triple(k, eps)
    assert all(math.isfinite(v) for v in (t.A, t.B, t.C))


def test_continuity_in_eccentricity():
    grid = np.linspace(0, 0.999, 400)
    for k in (1, 2, 5, 12):
        vals = np.array([[getattr(fourier_triple(k, e), f) for f in "ABC"] for e in grid])
        assert np.all(np.isfinite(vals))
        jumps = np.abs(np.diff(vals, axis=0)).max()
        assert jumps < 0.1
    near = fourier_triple(2, 1e-9)
    assert (near.A, near.B, near.C) == pytest.approx((0.5, -0.5, 0.5), abs=1e-8)


def test_triple_errors():
    with pytest.raises(DomainError):
        fourier_triple(0, 0.5)
    with pytest.raises(DomainError):
        fourier_triple(2, 1.0)
    with pytest.raises(DomainError):
        fourier_oracle(2.5, 0.5)


def test_kepler_position_landmarks():
    assert kepler_position(0.0, 2.0, 1.0, 0.0) == (2.0, 0.0)
    for eps in (0.0, 0.3, 0.9):
        x, y = kepler_position(eps, 1.0, 1.0, 0.0)
        assert x == pytest.approx(1 - eps) and y == pytest.approx(0.0, abs=1e-15)
    x, y = kepler_position(0.5, 1.0, 1.0, math.pi)
    assert x == pytest.approx(-1.5) and y == pytest.approx(0.0, abs=1e-14)


@settings(max_examples=100, deadline=None)
@given(M=st.floats(-50, 50), eps=st.floats(0, 0.995))
def test_solve_kepler_residual(M, eps):
    E = solve_kepler(M, eps)
    assert E - eps * math.sin(E) == pytest.approx(M, abs=1e-12)


def test_solve_kepler_nonconvergence():
    with pytest.raises(ConvergenceError):
        solve_kepler(1.0, 5.0, max_iter=3)


def test_constant_terms():
    assert constant_terms(0.0) == (0.5, 0.5)
    A0, B0 = constant_terms(0.6)
    assert A0 == pytest.approx(0.5 * (1 + 4 * 0.36))
    assert B0 == pytest.approx(0.5 * 0.64)
