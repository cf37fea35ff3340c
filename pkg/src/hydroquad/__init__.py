"""Hydrogenic E2 (and E1) radiative rates: semiclassical Kepler orbits versus Schrodinger theory."""

__version__ = "0.1.0"

from .constants import PhysicalConstants, get_constants
from .errors import (
    ConvergenceError,
    DomainError,
    HydroquadError,
    PrecisionOverflowError,
    SelectionRuleError,
)
from .kepler import FourierTriple, OrbitGeometry, fourier_oracle, fourier_triple, orbit_from_level
from .levels import Level, format_label, parse_label
from .quantum import qm_rate, qm_rate_lsj, strength, strength_lsj
from .rates import ChannelRate, Method
from .semiclassical import (
    e1_rate_fourier,
    e1_rate_rescaled,
    e2_rate_fourier,
    e2_rate_rescaled,
    rescaled_index,
    scl_branching_table,
)
from .specfun import bessel_j, bessel_j_prime, clebsch_gordan, wigner_3j, wigner_6j
