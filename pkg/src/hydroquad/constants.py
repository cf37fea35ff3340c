"""Physical constants with named CODATA profiles.

Every dimensional prefactor in the package is assembled from a
:class:`PhysicalConstants` instance. Derived quantities are properties so they
can never drift from the primaries, except when a profile deliberately
overrides them (used by the self-check negative control).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

__all__ = ["PhysicalConstants", "PROFILES", "DEFAULT_PROFILE", "get_constants"]

_C = 299792458.0
_H = 6.62607015e-34
_E = 1.602176634e-19


@dataclass(frozen=True)
class PhysicalConstants:
    name: str
    alpha: float
    electron_mass: float  # kg
    c: float = _C
    hbar: float = _H / (2.0 * math.pi)
    elementary_charge: float = _E
    # Optional overrides of derived values; None means "derive from primaries".
    bohr_radius_override: float | None = field(default=None, repr=False)

    @property
    def mec2(self) -> float:
        """Electron rest energy in J."""
        return self.electron_mass * self.c**2

    @property
    def mec2_over_hbar(self) -> float:
        """Electron rest energy over hbar, in s^-1."""
        return self.mec2 / self.hbar

    @property
    def bohr_radius(self) -> float:
        if self.bohr_radius_override is not None:
            return self.bohr_radius_override
        return self.hbar / (self.alpha * self.electron_mass * self.c)

    @property
    def coulomb_e2(self) -> float:
        """e^2/(4 pi eps0) in J m, expressed through alpha."""
        return self.alpha * self.hbar * self.c

    @property
    def hartree_over_hbar(self) -> float:
        """alpha^2 m_e c^2 / hbar in s^-1 (twice the Rydberg angular frequency)."""
        return self.alpha**2 * self.mec2_over_hbar

    def consistency_errors(self) -> dict[str, float]:
        """Relative mismatch of derived values against the primaries."""
        a0 = self.hbar / (self.alpha * self.electron_mass * self.c)
        eps0 = _E**2 / (4 * math.pi * self.alpha * self.hbar * self.c)
        e2 = self.elementary_charge**2 / (4 * math.pi * eps0)
        return {
            "bohr_radius": abs(self.bohr_radius - a0) / a0,
            "coulomb_e2": abs(self.coulomb_e2 - e2) / e2,
        }

    def with_overrides(self, **changes) -> "PhysicalConstants":
        return replace(self, **changes)


PROFILES: dict[str, PhysicalConstants] = {
    "codata2018": PhysicalConstants(
        name="codata2018", alpha=7.2973525693e-3, electron_mass=9.1093837015e-31
    ),
    "codata2022": PhysicalConstants(
        name="codata2022", alpha=7.2973525643e-3, electron_mass=9.1093837139e-31
    ),
}

DEFAULT_PROFILE = "codata2018"


def get_constants(name: str = DEFAULT_PROFILE) -> PhysicalConstants:
    try:
        return PROFILES[name]
    except KeyError:
        raise KeyError(f"unknown constants profile {name!r}; choose from {sorted(PROFILES)}") from None
