"""Exception hierarchy shared by every module."""

import numpy as np


class BackendMismatchError(TypeError):
    """Raised when exact and floating operands meet in one operation."""


class NotInvertibleError(ValueError):
    """The requested generalized inverse does not exist.

    This is a mathematical answer rather than a fault. ``condition``
    names the first existence condition that failed.
    """

    def __init__(self, condition, message=None):
        self.condition = condition
        super().__init__(message or condition)


class NonIdempotentError(ValueError):
    """A matrix that must be idempotent is not."""


class NumericalError(np.linalg.LinAlgError):
    """Base class for decisions that floating point cannot make reliably."""


class RankAmbiguityError(NumericalError):
    """A singular value sits within two decades of the rank threshold."""


class SpectralSeparationError(NumericalError):
    """Eigenvalues are too close to a contour or to the other spectral group."""


class TheoremViolation(AssertionError):
    """A guaranteed identity failed; indicates a bug or a broken precondition."""
