"""Exception hierarchy shared by every module."""


class MacfracError(Exception):
    """Base class for all library errors."""


class DomainError(MacfracError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class RangeError(MacfracError, ValueError):
    """An argument exceeds a configured maximum."""


class UnsupportedError(MacfracError):
    """The operation does not apply to the given input (e.g. atomic spectra)."""


class NumericalError(MacfracError, ArithmeticError):
    """A numerical routine failed to reach its tolerance."""


class ConvergenceError(NumericalError):
    """Successive refinements stagnated above tolerance."""


class TruncationError(NumericalError):
    """A semi-infinite integral never met its tail stopping rule."""


class DivergenceError(NumericalError):
    """A series showed sustained geometric growth."""
