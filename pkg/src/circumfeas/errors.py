"""Exception hierarchy shared by every module of the package."""


class CircumfeasError(Exception):
    """Base class for all errors raised by circumfeas."""


class InvalidInputError(CircumfeasError, ValueError):
    """Malformed numerical input (non-finite entries, shape mismatch)."""


class UndefinedProjectionError(CircumfeasError, ValueError):
    """The projection onto a non-convex set is not single valued at the point."""


class DegenerateCircumcenterError(CircumfeasError, ArithmeticError):
    """The circumcenter does not exist (affinely dependent, non-concyclic points).

    Attributes
    ----------
    rank : int
        Numerical rank of the Gram matrix of the displacement vectors.
    size : int
        Number of displacement vectors.
    """

    def __init__(self, message, rank, size):
        super().__init__(message)
        self.rank = rank
        self.size = size


class InvalidConfigError(CircumfeasError, ValueError):
    """Invalid generator, experiment or command-line configuration."""


class InfeasibleInstanceError(CircumfeasError, ValueError):
    """Affine sets with empty intersection."""


class UnsupportedCriterionError(CircumfeasError, ValueError):
    """Stopping criterion that cannot be evaluated for the given sets."""


class UndefinedRateError(CircumfeasError, ValueError):
    """Not enough data to estimate a convergence rate."""


class GenerationError(CircumfeasError, RuntimeError):
    """A random instance could not be generated with the requested structure."""
