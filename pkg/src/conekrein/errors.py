"""Exception hierarchy.

``ValidationError`` subclasses map to CLI exit code 2, ``ConvergenceError``
subclasses to exit code 3.
"""

from __future__ import annotations


class ConeKreinError(Exception):
    """Base class for all package errors."""


class ValidationError(ConeKreinError):
    """Invalid input: domain violations, malformed configs, bad matrices."""


class DomainError(ValidationError):
    """Argument outside the supported domain of an operation."""


class PoleError(ValidationError):
    """Evaluation requested at (or too close to) a spectral pole."""


class InvalidBoundaryConditionError(ValidationError):
    """A (P, Q) pair that does not define a self-adjoint extension."""


class UnsupportedModelError(ValidationError):
    """Operation not available for the given spectral model."""


class NonRegularExtensionError(ValidationError):
    """Raised where the comparison theory requires a regular extension.

    Carries the leading logarithm power ``l0 > 0`` that obstructs the
    large-negative-spectral-parameter expansion.
    """

    def __init__(self, message: str, l0: int = 1):
        super().__init__(message)
        self.l0 = l0


class ConvergenceError(ConeKreinError):
    """A numerical procedure failed to reach its tolerance."""


class TruncationError(ConvergenceError):
    """A truncated sum's tail bound exceeds the accuracy budget."""


class RootCountError(ConvergenceError):
    """Root bracketing found a different count than monotonicity predicts."""


class DegenerateLeadingTermError(ConvergenceError):
    """The leading determinant expansion coefficient cancels."""


class ExtrapolationError(ConvergenceError):
    """Successive extrapolants disagree beyond tolerance."""
