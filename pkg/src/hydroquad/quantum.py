"""Schrodinger-theory E2 rates for hydrogenic ions, without spin.

Lengths are in Bohr radii throughout; :func:`_rate_scale` is the single place
where a0, c and alpha turn a length^4 strength into a rate in s^-1.

Two routes to the same rate are kept side by side:

* the m-resolved route builds the six Cartesian quadrupole matrix elements
  from radial integrals and Gaunt-type angular integrals and contracts them
  with the direction/polarization average;
* the reduced route uses the 3j closed form of the m-summed strength.

Radial integrals are exact: both radial functions are expanded as
polynomial x exponential with rational coefficients and integrated term by
term, so I^2 comes out as a :class:`fractions.Fraction`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .constants import PhysicalConstants, get_constants
from .errors import DomainError
from .levels import Level
from .rates import ChannelRate, Method
from .specfun import (
    _fact,
    assoc_laguerre_coeffs,
    big_context,
    clebsch_gordan,
    wigner_3j,
    wigner_6j,
)

__all__ = [
    "QuadrupoleTensor",
    "TransitionStrength",
    "radial_wavefunction",
    "radial_integral",
    "radial_integral_squared",
    "transition_omega",
    "angular_lambda",
    "quadrupole_tensor",
    "m_resolved_rate",
    "angular_average_oracle",
    "e2_allowed",
    "strength",
    "strength_lsj",
    "qm_rate",
    "qm_rate_lsj",
    "qm_decay_channels",
]

MAX_N = 200


# --------------------------------------------------------------------------
# radial part
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _radial_poly(n: int, l: int) -> tuple[Fraction, tuple[tuple[int, Fraction], ...]]:
    """(N^2, [(power, coeff)]) with R_nl(r) = N * sum coeff r^power * exp(-r/n), Z = 1."""
    if n > MAX_N:
        raise DomainError(f"n = {n} exceeds the cap of {MAX_N}")
    norm_sq = Fraction(2, n) ** 3 * Fraction(_fact(n - l - 1), 2 * n * _fact(n + l))
    lag = assoc_laguerre_coeffs(n - l - 1, 2 * l + 1)
    terms = tuple((l + i, c * Fraction(2, n) ** (l + i)) for i, c in enumerate(lag))
    return norm_sq, terms


def _check_nl(n: int, l: int) -> None:
    if not (isinstance(n, int) and isinstance(l, int) and n >= 1 and 0 <= l < n):
        raise DomainError(f"invalid (n, l) = ({n}, {l})")


def radial_wavefunction(n: int, l: int, Z: int, r: float) -> float:
    """Normalized R_nl(r), r in units of a0, result in a0^(-3/2)."""
    _check_nl(n, l)
    if r < 0:
        raise DomainError("r must be nonnegative")
    norm_sq, terms = _radial_poly(n, l)
    rho = Z * r
    # alternating polynomial cancels against exp(-rho/n); keep spare digits
    with big_context(40 + int(rho / n)) as ctx:
        x = ctx.mpf(rho)
        poly = ctx.fsum(ctx.mpf(c.numerator) / c.denominator * x**p for p, c in terms)
        norm = ctx.sqrt(ctx.mpf(norm_sq.numerator) / norm_sq.denominator)
        return float(ctx.mpf(Z) ** 1.5 * norm * poly * ctx.exp(-x / n))


@lru_cache(maxsize=4096)
def _radial_exact(n: int, l: int, n2: int, l2: int) -> tuple[int, Fraction]:
    """I = sign * sqrt(square) for Z = 1, in a0^2."""
    na, ta = _radial_poly(n, l)
    nb, tb = _radial_poly(n2, l2)
    b = Fraction(1, n) + Fraction(1, n2)
    s = Fraction(0)
    for p, c in ta:
        for q, d in tb:
            k = p + q + 4
            s += c * d * Fraction(_fact(k)) / b ** (k + 1)
    sign = (s > 0) - (s < 0)
    return sign, na * nb * s * s


def radial_integral_squared(n: int, l: int, n2: int, l2: int, Z: int = 1) -> Fraction:
    """Exact I^2 = (int r^4 R_{n2 l2} R_{n l} dr)^2 in a0^4."""
    _check_nl(n, l)
    _check_nl(n2, l2)
    return _radial_exact(n, l, n2, l2)[1] / Fraction(Z) ** 4


def radial_integral(n: int, l: int, n2: int, l2: int, Z: int = 1) -> float:
    """int_0^inf r^4 R_{n2 l2}(r) R_{n l}(r) dr in a0^2."""
    _check_nl(n, l)
    _check_nl(n2, l2)
    sign, sq = _radial_exact(n, l, n2, l2)
    if sign == 0:
        return 0.0
    with big_context(40) as ctx:
        v = ctx.sqrt(ctx.mpf(sq.numerator) / sq.denominator)
        return sign * float(v) / Z**2


# --------------------------------------------------------------------------
# frequencies and prefactors
# --------------------------------------------------------------------------

def transition_omega(n: int, n2: int, Z: int = 1, constants: PhysicalConstants | None = None) -> float:
    """Balmer photon angular frequency for n -> n2 (rad/s)."""
    if not (1 <= n2 < n):
        raise DomainError(f"need 1 <= n' < n for emission, got n={n}, n'={n2}")
    c = constants or get_constants()
    return 0.5 * Z**2 * c.hartree_over_hbar * (1.0 / n2**2 - 1.0 / n**2)


def _rate_scale(omega: float, constants: PhysicalConstants) -> float:
    """e^2 omega^5 / (4 pi eps0 hbar c^5) times a0^4: converts a0^4 strengths to s^-1."""
    return constants.alpha * omega**5 / constants.c**4 * constants.bohr_radius**4


# --------------------------------------------------------------------------
# angular part and the Cartesian tensor
# --------------------------------------------------------------------------

def angular_lambda(l2: int, m2: int, la: int, ma: int, lb: int, mb: int) -> float:
    """Integral of Y*_{l2 m2} Y_{la ma} Y_{lb mb} over the unit sphere."""
    c0 = clebsch_gordan(la, 0, lb, 0, l2, 0)
    if c0.is_zero:
        return 0.0
    cm = clebsch_gordan(la, ma, lb, mb, l2, m2)
    if cm.is_zero:
        return 0.0
    prod = c0 * cm
    q = Fraction((2 * la + 1) * (2 * lb + 1), 2 * l2 + 1) * prod.square
    return prod.sign * math.sqrt(q.numerator / q.denominator) / math.sqrt(4 * math.pi)


@dataclass(frozen=True)
class QuadrupoleTensor:
    """<n' l' m'| r_i r_j |n l m> in a0^2."""

    xx: complex
    yy: complex
    zz: complex
    xy: complex
    xz: complex
    yz: complex
    initial: Level | None = None
    final: Level | None = None

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.xx, self.xy, self.xz], [self.xy, self.yy, self.yz], [self.xz, self.yz, self.zz]],
            dtype=complex,
        )

    @classmethod
    def from_matrix(cls, q: np.ndarray) -> "QuadrupoleTensor":
        q = np.asarray(q, dtype=complex)
        return cls(q[0, 0], q[1, 1], q[2, 2], q[0, 1], q[0, 2], q[1, 2])

    def averaged_square(self) -> float:
        """Direction- and polarization-averaged |sum eps_i k_j Q_ij|^2, closed form."""
        d = abs(self.xx) ** 2 + abs(self.yy) ** 2 + abs(self.zz) ** 2
        o = abs(self.xy) ** 2 + abs(self.xz) ** 2 + abs(self.yz) ** 2
        cross = (self.xx * self.yy.conjugate() + self.xx * self.zz.conjugate()
                 + self.yy * self.zz.conjugate()).real
        return max(d / 15 + o / 5 - 2 * cross / 30, 0.0)


_S2 = math.sqrt(2 * math.pi / 15)
_S0 = math.sqrt(4 * math.pi / 5)
_S1 = math.sqrt(8 * math.pi / 15)


def _require_m(level: Level) -> int:
    if level.m is None:
        raise DomainError(f"{level} needs a magnetic quantum number")
    return level.m


def quadrupole_tensor(initial: Level, final: Level) -> QuadrupoleTensor:
    """Cartesian quadrupole matrix elements between two m-resolved states."""
    m, m2 = _require_m(initial), _require_m(final)
    if initial.Z != final.Z:
        raise DomainError("initial and final levels must share Z")
    l, l2 = initial.l, final.l
    if abs(m2 - m) > 2 or abs(l2 - l) > 2:
        return QuadrupoleTensor(0j, 0j, 0j, 0j, 0j, 0j, initial, final)
    I = radial_integral(initial.n, l, final.n, l2, initial.Z)
    lam = {mu: angular_lambda(l2, m2, 2, mu, l, m) for mu in (-2, -1, 0, 1, 2)}
    trace = 1 / 3 if (l == l2 and m == m2) else 0.0
    qxx = I * (_S2 * (lam[2] + lam[-2]) - _S0 * lam[0] / 3 + trace)
    qyy = I * (-_S2 * (lam[2] + lam[-2]) - _S0 * lam[0] / 3 + trace)
    qzz = I * (2 * _S0 * lam[0] / 3 + trace)
    qxy = I * (-1j * _S2 * (lam[2] - lam[-2]))
    qxz = I * (0.5 * _S1 * (lam[-1] - lam[1]))
    qyz = I * (0.5j * _S1 * (lam[-1] + lam[1]))
    return QuadrupoleTensor(complex(qxx), complex(qyy), complex(qzz), qxy, complex(qxz), qyz,
                            initial, final)


def e2_allowed(l: int, l2: int) -> bool:
    """E2 selection rule on orbital angular momentum."""
    return abs(l - l2) in (0, 2) and not (l == 0 and l2 == 0)


def m_resolved_rate(initial: Level, final: Level,
                    constants: PhysicalConstants | None = None) -> ChannelRate:
    c = constants or get_constants()
    _require_m(initial)
    _require_m(final)
    omega = transition_omega(initial.n, final.n, initial.Z, c)
    if e2_allowed(initial.l, final.l) and abs(final.m - initial.m) <= 2:
        q = quadrupole_tensor(initial, final)
        rate = _rate_scale(omega, c) * q.averaged_square()
    else:
        rate = 0.0
    return ChannelRate(initial=initial, final=final, order=initial.n - final.n,
                       delta_l=final.l - initial.l,
                       omega=omega, rate=rate, method=Method.QUANTUM)


def angular_average_oracle(q: QuadrupoleTensor, omega: float,
                           constants: PhysicalConstants | None = None,
                           n_theta: int = 24, n_phi: int = 12, n_psi: int = 12) -> float:
    """Rate from explicit numerical averaging over photon polarization and direction.

    The polarization is parametrized by (theta, phi) and the propagation
    direction by the angle psi on the circle orthogonal to it. The integrand
    is a low-degree trigonometric polynomial, so Gauss-Legendre in theta and
    the periodic trapezoid rule in phi and psi are exact once the node counts
    exceed its degree.
    """
    c = constants or get_constants()
    x, w = np.polynomial.legendre.leggauss(n_theta)
    theta = 0.5 * np.pi * (x + 1)
    w_theta = 0.5 * np.pi * w
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    psi = 2 * np.pi * np.arange(n_psi) / n_psi
    th, ph, ps = np.meshgrid(theta, phi, psi, indexing="ij")
    st, ct, sp, cp, ss, cs = np.sin(th), np.cos(th), np.sin(ph), np.cos(ph), np.sin(ps), np.cos(ps)
    pol = np.stack([st * cp, st * sp, ct])
    k = np.stack([cp * ct * cs - sp * ss, sp * ct * cs + cp * ss, -st * cs])
    amp = np.einsum("i...,ij,j...->...", pol, q.matrix(), k)
    integrand = np.abs(amp) ** 2 * st
    # (1/4pi) int dtheta int dphi sin(theta) (1/2pi) int dpsi
    inner = integrand.mean(axis=(1, 2)) * (2 * np.pi)
    avg = float(np.dot(w_theta, inner)) / (4 * np.pi)
    return _rate_scale(omega, c) * avg


# --------------------------------------------------------------------------
# reduced strengths and rates
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TransitionStrength:
    """m-summed E2 strength in a0^4, held exactly as a rational number."""

    initial: Level
    final: Level
    exact: Fraction

    @property
    def value(self) -> float:
        return self.exact.numerator / self.exact.denominator if self.exact else 0.0

    def __float__(self) -> float:
        return self.value


def strength(n: int, l: int, n2: int, l2: int, Z: int = 1) -> TransitionStrength:
    """S = (2l+1)(2l'+1)/15 * (l' 2 l; 0 0 0)^2 * I^2."""
    ini, fin = Level(n, l, Z), Level(n2, l2, Z)
    if not e2_allowed(l, l2):
        return TransitionStrength(ini, fin, Fraction(0))
    w = wigner_3j(l2, 2, l, 0, 0, 0)
    if w.is_zero:
        return TransitionStrength(ini, fin, Fraction(0))
    s = Fraction((2 * l + 1) * (2 * l2 + 1), 15) * w.square * radial_integral_squared(n, l, n2, l2, Z)
    return TransitionStrength(ini, fin, s)


def strength_lsj(n: int, l: int, j, n2: int, l2: int, j2, Z: int = 1) -> TransitionStrength:
    """Fine-structure strength (2j+1)(2j'+1) {j' 2 j; l 1/2 l'}^2 S."""
    ini, fin = Level(n, l, Z, j=Fraction(j)), Level(n2, l2, Z, j=Fraction(j2))
    base = strength(n, l, n2, l2, Z).exact
    w = wigner_6j(fin.j, 2, ini.j, l, Fraction(1, 2), l2)
    s = (2 * ini.j + 1) * (2 * fin.j + 1) * w.square * base
    return TransitionStrength(ini, fin, Fraction(s))


def qm_rate(n: int, l: int, n2: int, l2: int, Z: int = 1,
            constants: PhysicalConstants | None = None) -> ChannelRate:
    """m-averaged, m'-summed E2 rate (n l) -> (n' l') in s^-1."""
    c = constants or get_constants()
    omega = transition_omega(n, n2, Z, c)
    s = strength(n, l, n2, l2, Z)
    rate = _rate_scale(omega, c) * s.value / (2 * l + 1) if s.exact else 0.0
    return ChannelRate(initial=s.initial, final=s.final, order=n - n2,
                       delta_l=l2 - l,
                       omega=omega, rate=rate, method=Method.QUANTUM)


def qm_rate_lsj(n: int, l: int, j, n2: int, l2: int, j2, Z: int = 1,
                constants: PhysicalConstants | None = None) -> ChannelRate:
    """E2 rate between fine-structure levels, using the nonrelativistic Balmer frequency."""
    c = constants or get_constants()
    omega = transition_omega(n, n2, Z, c)
    s = strength_lsj(n, l, j, n2, l2, j2, Z)
    rate = _rate_scale(omega, c) * s.value / (2 * s.initial.j + 1) if s.exact else 0.0
    return ChannelRate(initial=s.initial, final=s.final, order=n - n2,
                       delta_l=l2 - l,
                       omega=omega, rate=float(rate), method=Method.QUANTUM)


def qm_decay_channels(initial: Level, constants: PhysicalConstants | None = None) -> list[ChannelRate]:
    """All E2 channels n' < n, l' in {l-2, l, l+2}, sorted by (Delta n, Delta l)."""
    out = []
    for dn in range(1, initial.n):
        n2 = initial.n - dn
        for dl in (-2, 0, 2):
            l2 = initial.l + dl
            if 0 <= l2 < n2 and e2_allowed(initial.l, l2):
                out.append(qm_rate(initial.n, initial.l, n2, l2, initial.Z, constants))
    return out
