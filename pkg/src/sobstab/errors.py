"""Exception taxonomy.

Two families matter to callers (and to the CLI exit codes): validation
errors, raised before any heavy computation for inputs outside an
operation's contract, and numerical errors, raised when a computation
cannot certify its own accuracy.
"""


class SobstabError(Exception):
    """Base class for every error raised by this package."""


class SobstabValidationError(SobstabError, ValueError):
    """Input rejected before computation (CLI exit code 2)."""


class SobstabNumericalError(SobstabError, ArithmeticError):
    """Computation could not certify its result (CLI exit code 3)."""


class InvalidOrder(SobstabValidationError):
    """Quadrature order outside the supported range."""


class DegreeOutOfRange(SobstabValidationError):
    """Zonal harmonic degree outside the basis truncation."""


class AliasedGrid(SobstabValidationError):
    """Synthesis grid too small (or not a power of two) for the modes present."""


class SubcriticalExponent(SobstabValidationError):
    """Exponent q <= 2: the inequality degenerates."""


class SupercriticalExponent(SobstabValidationError):
    """Exponent q >= 2d/(d-2) on the sphere with d >= 3."""


class DimensionTooSmall(SobstabValidationError):
    """Dimension below the geometry's minimum."""


class EpsilonOutOfRange(SobstabValidationError):
    """Family parameter outside the expansion's validity window."""


class InsufficientRange(SobstabValidationError):
    """Fit data spans too narrow a range of distances."""


class DegenerateDistance(SobstabError):
    """A stability quotient was demanded for a (numerically) constant function."""


class QuadratureNotConverged(SobstabNumericalError):
    """Adaptive grid doubling hit its cap before the tolerance was met.

    Carries the last two integral values so callers can judge how far
    convergence got.
    """

    def __init__(self, message, last=None, previous=None):
        super().__init__(message)
        self.last = last
        self.previous = previous


class NoisyScan(SobstabNumericalError):
    """A scan deficit fell below 100x the estimated quadrature error."""


class SearchDegenerate(SobstabNumericalError):
    """Every optimizer restart collapsed onto the constant functions."""
