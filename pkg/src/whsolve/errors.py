"""Exception hierarchy shared by all modules."""


class WhsolveError(Exception):
    """Base class for every error raised by this package."""


class InvalidGridError(WhsolveError, ValueError):
    """Grid parameters violate a precondition."""


class SideError(WhsolveError, ValueError):
    """A sampled function lives on the wrong side (state vs Fourier)."""


class OffGridShiftError(WhsolveError, ValueError):
    """A decomposition shift does not coincide with a state-space node."""


class SingularSymbolError(WhsolveError, ArithmeticError):
    """A factorisation symbol vanishes at a grid node."""


class WindingNumberError(WhsolveError, ArithmeticError):
    """A factorisation symbol has nonzero index along the grid."""


class SingularDenominatorError(WhsolveError, ArithmeticError):
    """A solver would divide by a (numerically) vanishing quantity."""


class SingularSystemError(WhsolveError, ArithmeticError):
    """The Nyström linear system is singular."""


class InvalidFilterError(WhsolveError, ValueError):
    """Filter parameters are out of range."""


class InvalidProblemError(WhsolveError, ValueError):
    """Problem data are inconsistent (ordering of limits, missing data)."""
