"""Quantized Kepler ellipses and the Fourier-Bessel series of their quadratic moments.

With the orbit in the xy plane and the time origin at perihelion,

    x(t)^2 / a^2 = sum_k A_k cos(k Omega t)
    y(t)^2 / a^2 = sum_k B_k cos(k Omega t)
    x(t) y(t) / a^2 = sum_k C_k sin(k Omega t)

and the coefficients are closed forms in J_{k+-1}(k eps), J_{k+-2}(k eps).
:func:`fourier_oracle` recomputes them by integrating the trajectory directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

from .constants import PhysicalConstants, get_constants
from .errors import ConvergenceError, DomainError
from .levels import Level
from .specfun import _series, big_context, required_digits

__all__ = [
    "OrbitGeometry",
    "FourierTriple",
    "orbit_from_level",
    "eccentricity",
    "fourier_triple",
    "constant_terms",
    "solve_kepler",
    "kepler_position",
    "fourier_oracle",
]


@dataclass(frozen=True)
class OrbitGeometry:
    a: float  # semimajor axis, m
    omega: float  # orbital angular frequency, rad/s
    eccentricity: float

    def __post_init__(self):
        if not (self.a > 0 and self.omega > 0):
            raise DomainError("semimajor axis and frequency must be positive")
        if not 0 <= self.eccentricity < 1:
            raise DomainError(f"eccentricity {self.eccentricity} not in [0, 1)")

    @property
    def period(self) -> float:
        return 2 * math.pi / self.omega


@dataclass(frozen=True)
class FourierTriple:
    k: float
    A: float
    B: float
    C: float


def eccentricity(n: int, l: int) -> float:
    """Semiclassical eccentricity sqrt(1 - (l + 1/2)^2 / n^2)."""
    return math.sqrt(1.0 - (l + 0.5) ** 2 / n**2)


def orbit_from_level(level: Level, constants: PhysicalConstants | None = None) -> OrbitGeometry:
    c = constants or get_constants()
    Z, n = level.Z, level.n
    a = n**2 * c.hbar / (Z * c.alpha * c.electron_mass * c.c)
    omega = Z**2 * c.hartree_over_hbar / n**3
    return OrbitGeometry(a=a, omega=omega, eccentricity=eccentricity(n, level.l))


def _check_k_eps(k, eps) -> None:
    if not k > 0:
        raise DomainError(f"harmonic index must be positive, got {k}")
    if not 0 <= eps < 1:
        raise DomainError(f"eccentricity {eps} not in [0, 1)")


def _bessel_window(ctx, k, x):
    """J_{k-2..k+2}(x): two series evaluations, then downward recurrence."""
    if x == 0:
        return [_series(ctx, k + d, x) for d in (-2, -1, 0, 1, 2)]
    jp2 = _series(ctx, k + 2, x)
    jp1 = _series(ctx, k + 1, x)
    j0 = 2 * (k + 1) / x * jp1 - jp2
    jm1 = 2 * k / x * j0 - jp1
    jm2 = 2 * (k - 1) / x * jm1 - j0
    return [jm2, jm1, j0, jp1, jp2]


def _triple_big(ctx, k, eps):
    """(A_k, B_k, C_k) as mpmath numbers in the active precision of ``ctx``."""
    k = ctx.mpf(k)
    eps = ctx.mpf(eps)
    x = k * eps
    jm2, jm1, _, jp1, jp2 = _bessel_window(ctx, k, x)
    one_e2 = 1 - eps * eps
    A = (jm2 - jp2 - 2 * eps * (jm1 - jp1)) / k
    B = one_e2 / k * (jp2 - jm2)
    C = ctx.sqrt(one_e2) / k * (jp2 + jm2 - eps * (jp1 + jm1))
    return A, B, C


def fourier_triple(k: float, eps: float) -> FourierTriple:
    """Closed-form Fourier coefficients (A_k, B_k, C_k) at real harmonic index k > 0.

    Non-integer ``k`` uses Bessel functions of real order in the same formulas.
    """
    _check_k_eps(k, eps)
    with big_context(required_digits(k * eps + 2)) as ctx:
        A, B, C = _triple_big(ctx, k, eps)
        return FourierTriple(k=k, A=float(A), B=float(B), C=float(C))


def constant_terms(eps: float) -> tuple[float, float]:
    """Zero-frequency terms (A_0, B_0). They carry no radiation and no rate uses them."""
    return 0.5 * (1 + 4 * eps**2), 0.5 * (1 - eps**2)


def solve_kepler(mean_anomaly: float, eps: float, tol: float = 1e-14, max_iter: int = 100) -> float:
    """Eccentric anomaly E with E - eps sin E = M, by Newton iteration."""
    M = mean_anomaly % (2 * math.pi)
    E = M if eps < 0.8 else math.pi
    for _ in range(max_iter):
        dE = (E - eps * math.sin(E) - M) / (1 - eps * math.cos(E))
        E -= dE
        if abs(dE) < tol:
            return E + (mean_anomaly - M)
    raise ConvergenceError(f"Kepler equation did not converge for M={mean_anomaly}, eps={eps}")


def kepler_position(eps: float, a: float, omega: float, t: float) -> tuple[float, float]:
    """Position (x, y) on the ellipse at time t, perihelion at t = 0 on the +x axis."""
    E = solve_kepler(omega * t, eps)
    return a * (math.cos(E) - eps), a * math.sqrt(1 - eps * eps) * math.sin(E)


def fourier_oracle(k: int, eps: float, a: float = 1.0, omega: float = 1.0,
                   segments: int = 32) -> FourierTriple:
    """Fourier coefficients by adaptive quadrature of the trajectory over one period.

    The period is split at times whose eccentric anomalies are equally spaced,
    which concentrates breakpoints around perihelion where the motion is fastest.
    """
    if not isinstance(k, int) or k < 1:
        raise DomainError("the oracle needs an integer harmonic k >= 1")
    _check_k_eps(k, eps)
    T = 2 * math.pi / omega
    edges = [(E - eps * math.sin(E)) / omega
             for E in (2 * math.pi * i / segments for i in range(segments + 1))]

    def xx(t):
        x, _ = kepler_position(eps, a, omega, t)
        return x * x * math.cos(k * omega * t)

    def yy(t):
        _, y = kepler_position(eps, a, omega, t)
        return y * y * math.cos(k * omega * t)

    def xy(t):
        x, y = kepler_position(eps, a, omega, t)
        return x * y * math.sin(k * omega * t)

    out = []
    for f in (xx, yy, xy):
        total = 0.0
        for t0, t1 in zip(edges[:-1], edges[1:]):
            val, err, *rest = integrate.quad(
                f, t0, t1, epsabs=1e-17 * a * a * T, epsrel=1e-13, limit=200, full_output=1
            )
            if len(rest) > 1 and err > 1e-11 * a * a * T:
                raise ConvergenceError(f"quadrature failed on [{t0}, {t1}]: {rest[1]}")
            total += val
        out.append(2 * total / (T * a * a))
    return FourierTriple(k=k, A=out[0], B=out[1], C=out[2])
