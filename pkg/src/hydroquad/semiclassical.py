"""Semiclassical E2 and E1 rates from the Fourier spectrum of a Kepler orbit.

Each Fourier harmonic k of the orbit's quadrupole moment radiates at k*Omega.
The power in the m = 0, +2, -2 multipole components, divided by the photon
energy, gives the rate for Delta l = 0, -2, +2 respectively. The harmonic
index is then rescaled to the non-integer value that reproduces the Balmer
frequency of a given Delta n, with a compensating weight (1 - Delta n/n)^-3.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from .constants import PhysicalConstants, get_constants
from .errors import DomainError, PrecisionOverflowError, SelectionRuleError
from .kepler import _check_k_eps, _triple_big, orbit_from_level
from .levels import Level
from .quantum import transition_omega
from .rates import ChannelRate, Method
from .specfun import _prime, _series, big_context, required_digits

__all__ = [
    "e2_prefactor",
    "e1_prefactor",
    "e2_reduced_rate",
    "e1_reduced_rate",
    "e2_rate_fourier",
    "e1_rate_fourier",
    "rescaled_index",
    "e2_rate_rescaled",
    "e1_rate_rescaled",
    "Branch",
    "BranchingTable",
    "scl_branching_table",
    "branching_fractions",
]

E2_CHANNELS = (-2, 0, 2)
E1_CHANNELS = (-1, 1)

TAIL_TOLERANCE = 1e-12


def e2_prefactor(n: int, Z: int = 1, constants: PhysicalConstants | None = None) -> float:
    """Z^6 alpha^7 m_e c^2 / (60 n^7 hbar) in s^-1."""
    c = constants or get_constants()
    return Z**6 * c.alpha**7 * c.mec2_over_hbar / (60 * n**7)


def e1_prefactor(n: int, Z: int = 1, constants: PhysicalConstants | None = None) -> float:
    """2 Z^4 alpha^5 m_e c^2 / (3 n^5 hbar) in s^-1."""
    c = constants or get_constants()
    return 2 * Z**4 * c.alpha**5 * c.mec2_over_hbar / (3 * n**5)


def _level_eps(ctx, level: Level):
    return ctx.sqrt(1 - ctx.mpf((2 * level.l + 1) ** 2) / (4 * level.n**2))


def _e2_reduced(ctx, k, eps, delta_l: int):
    A, B, C = _triple_big(ctx, k, eps)
    k = ctx.mpf(k)
    if delta_l == 0:
        return k**5 / 4 * (A + B) ** 2
    # Delta l = -2 is the m = +2 component
    combo = A - B + 2 * C if delta_l == -2 else A - B - 2 * C
    return 3 * k**5 / 8 * combo**2


def _e1_reduced(ctx, k, eps, delta_l: int):
    k = ctx.mpf(k)
    eps = ctx.mpf(eps)
    if eps == 0:
        # circular orbit: only the fundamental radiates, and only Delta l = -1
        if k == 1:
            return ctx.mpf(1 if delta_l == -1 else 0)
        if k > 1:
            return ctx.mpf(0)
        raise DomainError(f"E1 rate at eps = 0 diverges for k = {k} < 1")
    x = k * eps
    jp = _prime(ctx, k, x)
    j = _series(ctx, k, x)
    root = ctx.sqrt(1 / (eps * eps) - 1)
    combo = jp - root * j if delta_l == 1 else jp + root * j
    return k * combo**2


def _check_channel(delta_l: int, channels: tuple[int, ...]) -> None:
    if delta_l not in channels:
        raise SelectionRuleError(f"delta_l = {delta_l} not in {channels}")


def e2_reduced_rate(k: float, eps: float, delta_l: int) -> float:
    """Dimensionless E2 rate: k^5/4 (A+B)^2 for Delta l = 0, 3k^5/8 (A-B -+ 2C)^2 for -+2."""
    _check_channel(delta_l, E2_CHANNELS)
    _check_k_eps(k, eps)
    with big_context(required_digits(k * eps + 2)) as ctx:
        return float(_e2_reduced(ctx, k, eps, delta_l))


def e1_reduced_rate(k: float, eps: float, delta_l: int) -> float:
    """Dimensionless E1 rate k (J'_k(k eps) -+ sqrt(eps^-2 - 1) J_k(k eps))^2, upper sign for +1."""
    _check_channel(delta_l, E1_CHANNELS)
    _check_k_eps(k, eps)
    with big_context(required_digits(k * eps + 2)) as ctx:
        return float(_e1_reduced(ctx, k, eps, delta_l))


def e2_rate_fourier(level: Level, k: float, delta_l: int,
                    constants: PhysicalConstants | None = None) -> ChannelRate:
    """Rate radiated by harmonic k into the Delta l channel, before rescaling."""
    _check_channel(delta_l, E2_CHANNELS)
    c = constants or get_constants()
    orbit = orbit_from_level(level, c)
    with big_context(required_digits(k + 2)) as ctx:
        red = float(_e2_reduced(ctx, k, _level_eps(ctx, level), delta_l))
    return ChannelRate(initial=level, order=k, delta_l=delta_l, omega=k * orbit.omega,
                       rate=e2_prefactor(level.n, level.Z, c) * red, method=Method.FOURIER)


def e1_rate_fourier(level: Level, k: float, delta_l: int,
                    constants: PhysicalConstants | None = None) -> ChannelRate:
    _check_channel(delta_l, E1_CHANNELS)
    c = constants or get_constants()
    orbit = orbit_from_level(level, c)
    with big_context(required_digits(k + 2)) as ctx:
        red = float(_e1_reduced(ctx, k, _level_eps(ctx, level), delta_l))
    return ChannelRate(initial=level, order=k, delta_l=delta_l, omega=k * orbit.omega,
                       rate=e1_prefactor(level.n, level.Z, c) * red, method=Method.FOURIER,
                       multipole="E1")


def _rescaled_exact(n: int, dn: int) -> Fraction:
    if not (isinstance(n, int) and isinstance(dn, int)) or not 1 <= dn <= n - 1:
        raise DomainError(f"need 1 <= Delta n <= n - 1, got n={n}, Delta n={dn}")
    # (n/2) [(1 - dn/n)^-2 - 1], written over a common denominator
    return Fraction(n * dn * (2 * n - dn), 2 * (n - dn) ** 2)


def rescaled_index(n: int, dn: int) -> float:
    """Non-integer harmonic index whose frequency matches the Balmer line n -> n - dn."""
    k = _rescaled_exact(n, dn)
    return k.numerator / k.denominator


def _final_level(initial: Level, dn: int, delta_l: int) -> Level:
    n2, l2 = initial.n - dn, initial.l + delta_l
    if not 1 <= n2 or l2 < 0 or l2 >= n2:
        raise SelectionRuleError(
            f"final state n'={n2}, l'={l2} is unphysical for {initial.label} with "
            f"Delta n={dn}, Delta l={delta_l}"
        )
    return Level(n2, l2, initial.Z)


def _rescaled(initial: Level, dn: int, delta_l: int, multipole: str,
              constants: PhysicalConstants | None) -> ChannelRate:
    c = constants or get_constants()
    k = _rescaled_exact(initial.n, dn)
    final = _final_level(initial, dn, delta_l)
    weight = Fraction(initial.n, initial.n - dn) ** 3
    with big_context(required_digits(float(k) + 2)) as ctx:
        kk = ctx.mpf(k.numerator) / k.denominator
        eps = _level_eps(ctx, initial)
        if multipole == "E2":
            red = _e2_reduced(ctx, kk, eps, delta_l)
            pref = e2_prefactor(initial.n, initial.Z, c)
        else:
            red = _e1_reduced(ctx, kk, eps, delta_l)
            pref = e1_prefactor(initial.n, initial.Z, c)
        red = float(red * weight.numerator / weight.denominator)
    return ChannelRate(initial=initial, final=final, order=dn, delta_l=delta_l,
                       omega=transition_omega(initial.n, final.n, initial.Z, c),
                       rate=pref * red, method=Method.RESCALED, multipole=multipole)


def e2_rate_rescaled(initial: Level, dn: int, delta_l: int,
                     constants: PhysicalConstants | None = None) -> ChannelRate:
    """Semiclassical E2 rate for (n, l) -> (n - dn, l + delta_l).

    The reported ``omega`` is the Balmer frequency of the quantum transition.
    """
    _check_channel(delta_l, E2_CHANNELS)
    return _rescaled(initial, dn, delta_l, "E2", constants)


def e1_rate_rescaled(initial: Level, dn: int, delta_l: int,
                     constants: PhysicalConstants | None = None) -> ChannelRate:
    _check_channel(delta_l, E1_CHANNELS)
    if initial.l == 0:
        warnings.warn("rescaled E1 rates are unreliable for l = 0 initial states", stacklevel=2)
    return _rescaled(initial, dn, delta_l, "E1", constants)


# --------------------------------------------------------------------------
# branching tables
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Branch:
    record: ChannelRate
    percent: float


@dataclass
class BranchingTable:
    initial: Level
    denominator: str
    branches: list[Branch] = field(default_factory=list)
    k_max: int = 0
    tail_estimate: float = 0.0
    truncated: bool = False

    def by_method(self, method: Method) -> list[Branch]:
        return [b for b in self.branches if b.record.method is method]


def branching_fractions(records: list[ChannelRate], denominator_records: list[ChannelRate] | None = None
                        ) -> list[Branch]:
    """Percent of the summed rate carried by each record."""
    pool = records if denominator_records is None else denominator_records
    total = math.fsum(r.rate for r in pool)
    if total == 0:
        return [Branch(r, 0.0) for r in records]
    return [Branch(r, 100.0 * r.rate / total) for r in records]


def _fourier_records(level: Level, multipoles: tuple[str, ...], c: PhysicalConstants
                     ) -> tuple[list[ChannelRate], int, float, bool]:
    orbit = orbit_from_level(level, c)
    k_star = level.n / (1 - orbit.eccentricity)
    k_cap = 10 * level.n**2
    p2 = e2_prefactor(level.n, level.Z, c)
    p1 = e1_prefactor(level.n, level.Z, c)
    out: list[ChannelRate] = []
    total = 0.0
    prev = None
    tail = 0.0
    truncated = False
    k = 0
    while k < k_cap:
        k += 1
        try:
            digits = required_digits(k + 2)
        except PrecisionOverflowError:
            truncated = True
            k -= 1
            break
        step = []
        with big_context(digits) as ctx:
            eps = _level_eps(ctx, level)
            if "E2" in multipoles:
                for dl in E2_CHANNELS:
                    step.append(("E2", dl, p2 * float(_e2_reduced(ctx, k, eps, dl))))
            if "E1" in multipoles:
                for dl in E1_CHANNELS:
                    step.append(("E1", dl, p1 * float(_e1_reduced(ctx, k, eps, dl))))
        for mp, dl, rate in step:
            out.append(ChannelRate(initial=level, order=k, delta_l=dl, omega=k * orbit.omega,
                                   rate=rate, method=Method.FOURIER, multipole=mp))
        here = math.fsum(r for *_, r in step)
        total += here
        if prev and k > k_star and here < prev:
            q = here / prev
            tail = here * q / (1 - q)
            if tail < TAIL_TOLERANCE * total:
                break
        prev = here
    else:
        truncated = True
    if truncated:
        warnings.warn(f"Fourier series for {level.label} truncated at k = {k}", stacklevel=3)
    return out, k, tail, truncated


def _rescaled_records(level: Level, multipoles: tuple[str, ...], c: PhysicalConstants
                      ) -> tuple[list[ChannelRate], list[int]]:
    """Rescaled records for every physical channel, plus the Delta n values
    skipped because their index needs more digits than the precision cap."""
    out = []
    skipped: list[int] = []
    for dn in range(1, level.n):
        for mp, channels in (("E2", E2_CHANNELS), ("E1", E1_CHANNELS)):
            if mp not in multipoles:
                continue
            for dl in channels:
                n2, l2 = level.n - dn, level.l + dl
                if l2 < 0 or l2 >= n2:
                    continue
                try:
                    with warnings.catch_warnings():
                        warnings.simplefilter("ignore")
                        out.append(_rescaled(level, dn, dl, mp, c))
                except PrecisionOverflowError:
                    if dn not in skipped:
                        skipped.append(dn)
    return out, skipped


def scl_branching_table(initial: Level, channel: Literal["E2"] = "E2",
                        denominator: Literal["e2", "all"] = "e2",
                        constants: PhysicalConstants | None = None) -> BranchingTable:
    """Fourier-mode and rescaled E2 records with branching percentages.

    Fractions are normalized within each method class. With
    ``denominator="all"`` E1 records are emitted too and the denominator
    becomes the E1 + E2 total of the class.
    """
    if channel != "E2":
        raise DomainError("only E2 branching tables are supported")
    if denominator not in ("e2", "all"):
        raise DomainError(f"unknown denominator mode {denominator!r}")
    c = constants or get_constants()
    multipoles = ("E2",) if denominator == "e2" else ("E2", "E1")
    fourier, k_max, tail, truncated = _fourier_records(initial, multipoles, c)
    rescaled, skipped = _rescaled_records(initial, multipoles, c)
    if skipped:
        truncated = True
        warnings.warn(f"rescaled records for {initial.label} truncated: Delta n in {skipped} "
                      "exceeds the precision cap", stacklevel=2)
    key = lambda r: (r.multipole != "E2", r.order, r.delta_l)  # noqa: E731
    branches = (branching_fractions(sorted(fourier, key=key))
                + branching_fractions(sorted(rescaled, key=key)))
    return BranchingTable(initial=initial, denominator=denominator, branches=branches,
                          k_max=k_max, tail_estimate=tail, truncated=truncated)
