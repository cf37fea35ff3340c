"""Record type shared by the semiclassical and quantum rate calculations."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .levels import Level

__all__ = ["Method", "ChannelRate"]


class Method(str, enum.Enum):
    QUANTUM = "quantum"
    FOURIER = "fourier"
    RESCALED = "rescaled"


@dataclass(frozen=True)
class ChannelRate:
    """One decay channel of ``initial``.

    ``order`` is the principal-quantum-number drop Delta n for quantum and
    rescaled records and the (integer) Fourier harmonic k for Fourier records.
    ``omega`` is the photon angular frequency in rad/s, ``rate`` is in s^-1.
    """

    initial: Level
    order: float
    delta_l: int
    omega: float
    rate: float
    method: Method
    multipole: str = "E2"
    final: Level | None = None

    def __post_init__(self):
        if not self.rate >= 0:
            raise DomainError(f"negative or NaN rate {self.rate}")
        allowed = {"E2": (-2, 0, 2), "E1": (-1, 1)}[self.multipole]
        # forbidden channels are reported with an exact zero rate
        if self.rate > 0 and self.delta_l not in allowed:
            raise DomainError(f"delta_l = {self.delta_l} is not an {self.multipole} channel")

    @property
    def delta_n(self) -> int | None:
        return None if self.method is Method.FOURIER else int(self.order)

    @property
    def frequency(self) -> float:
        """Photon frequency f = omega / 2 pi in Hz."""
        return self.omega / (2 * math.pi)
