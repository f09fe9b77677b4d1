"""Exception types used across the package."""

__all__ = ["IsoflowError", "DomainError", "EvaluationError", "NotSaddleError"]


class IsoflowError(Exception):
    """Base class for package errors."""


class DomainError(IsoflowError, ValueError):
    """Evaluation or start point outside the valid domain."""


class EvaluationError(IsoflowError, ArithmeticError):
    """A derivative evaluation produced a non-finite value."""


class NotSaddleError(IsoflowError, ValueError):
    """An operation requiring a saddle point received something else."""
