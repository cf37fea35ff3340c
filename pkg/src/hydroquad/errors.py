"""Exception hierarchy shared by every module."""


class HydroquadError(Exception):
    """Base class for all library errors."""


class DomainError(HydroquadError, ValueError):
    """Argument outside the domain of a function."""


class PrecisionOverflowError(HydroquadError, ArithmeticError):
    """Required working precision exceeds the configured cap."""


class SelectionRuleError(DomainError):
    """Transition forbidden by a selection rule or unphysical final state."""


class ConvergenceError(HydroquadError, RuntimeError):
    """Iteration or quadrature failed to converge."""
