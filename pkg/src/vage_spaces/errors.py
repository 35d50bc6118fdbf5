"""
Exception hierarchy for the library.

Every class carries the exit code the command-line front end returns when the
error escapes a subcommand.
"""


class VageError(Exception):
    """Root of all library errors."""
    exit_code = 1


class UsageError(VageError):
    """Malformed input: expressions, weight specs, JSON payloads, flags."""
    exit_code = 2


class DomainError(VageError):
    """A documented precondition of an operation does not hold."""
    exit_code = 3


class WindowError(DomainError):
    """Index outside a truncation window, or two windows that differ."""


class WeightDomainError(DomainError):
    """Weight evaluated at a generator the family does not define."""


class NotAdmissibleError(DomainError):
    """Weight with a_{e_n} <= 1 where admissibility is required."""


class NotInvertibleError(DomainError):
    """Element (or matrix) whose expectation is not invertible."""


class DimensionMismatchError(DomainError):
    """Matrix or realization dimensions that do not fit together."""


class EvaluationDomainError(DomainError):
    """Realization or rational function evaluated outside its domain."""


class ConvergenceDomainError(DomainError):
    """Power series composed outside the guaranteed disk |E[f]| < R/A(d)."""


class PreconditionError(DomainError):
    """Generic violated precondition (p < q + d, |s| >= 1, guard limits...)."""


class NumericError(VageError):
    """Numerical process that failed to produce a trustworthy value."""
    exit_code = 4


class NonConvergenceError(NumericError):
    """Scalar series that did not settle within the iteration budget."""


class DivergenceError(NumericError):
    """Sum or product known to diverge (e.g. d below the regularity index)."""


class NumericOverflowError(NumericError):
    """Result outside the double-precision range."""


class QuadratureError(NumericError):
    """Quadrature refinements disagree beyond tolerance."""
