"""Exception types shared across the package."""


class IsacBoundsError(Exception):
    """Base class for all package-specific errors."""


class DomainError(IsacBoundsError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class NotPositiveDefinite(IsacBoundsError):
    """A matrix required to be positive definite failed factorization."""


class SingularFisher(IsacBoundsError):
    """Fisher information is singular or too ill-conditioned to invert."""


class DegenerateCombination(IsacBoundsError):
    """Beamformer combination cancelled to (numerically) zero."""


class GridTooCoarse(IsacBoundsError):
    """Numerical integration grid failed the refinement convergence check."""


class InfeasibleSeparation(IsacBoundsError):
    """Rejection sampling could not satisfy the angle separation rule."""


class EmptyInput(IsacBoundsError, ValueError):
    """An operation requiring a nonempty collection received an empty one."""


class TooFewPoints(IsacBoundsError, ValueError):
    """Plotting requires at least two data points."""


class ConfigError(IsacBoundsError, ValueError):
    """Configuration file is malformed or violates a constraint."""
