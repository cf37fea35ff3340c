"""Hydrogenic levels and spectroscopic labels such as ``3d`` or ``8k``."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

__all__ = ["Level", "L_LETTERS", "l_letter", "l_from_letter", "parse_label", "format_label"]

# j is skipped by spectroscopic convention, and letters already used are not reused
L_LETTERS = "spdfghiklmnoqrtuvwxyz"

_LABEL = re.compile(r"^\s*(\d+)\s*([a-z])\s*$")


@dataclass(frozen=True)
class Level:
    """Hydrogenic state |n l [m] [j]> of a one-electron ion with nuclear charge Z."""

    n: int
    l: int
    Z: int = 1
    m: int | None = None
    j: Fraction | None = None

    def __post_init__(self):
        for name in ("n", "l", "Z"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise DomainError(f"{name} must be an integer, got {v!r}")
        if self.Z < 1:
            raise DomainError("Z must be positive")
        if self.n < 1:
            raise DomainError("n must be positive")
        if not 0 <= self.l < self.n:
            raise DomainError(f"l = {self.l} not in [0, {self.n - 1}]")
        if self.m is not None and abs(self.m) > self.l:
            raise DomainError(f"|m| = {abs(self.m)} exceeds l = {self.l}")
        if self.j is not None:
            j = Fraction(self.j)
            if abs(j - self.l) != Fraction(1, 2) or j < Fraction(1, 2):
                raise DomainError(f"j = {j} incompatible with l = {self.l}")
            object.__setattr__(self, "j", j)

    @property
    def label(self) -> str:
        return format_label(self.n, self.l)

    def __str__(self) -> str:
        s = self.label
        if self.j is not None:
            s += f"_{self.j}"
        if self.m is not None:
            s += f"(m={self.m})"
        return s


def l_letter(l: int) -> str:
    if not 0 <= l < len(L_LETTERS):
        raise DomainError(f"no spectroscopic letter for l = {l}")
    return L_LETTERS[l]


def l_from_letter(letter: str) -> int:
    idx = L_LETTERS.find(letter.lower())
    if len(letter) != 1 or idx < 0:
        raise ValueError(f"unknown orbital letter {letter!r}")
    return idx


def format_label(n: int, l: int) -> str:
    return f"{n}{l_letter(l)}"


def parse_label(text: str) -> tuple[int, int]:
    """Split ``"9h"`` into ``(9, 5)``. Raises ValueError on malformed labels.

    Physical validity (l < n) is checked by :class:`Level`, not here.
    """
    m = _LABEL.match(text.lower())
    if not m:
        raise ValueError(f"cannot parse spectroscopic label {text!r}")
    return int(m.group(1)), l_from_letter(m.group(2))
