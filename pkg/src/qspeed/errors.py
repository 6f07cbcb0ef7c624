"""Exception types shared across the package.

InvalidInputError subclasses ValueError so callers that only know about
the standard library can still catch validation failures.  Numerical
consistency failures are kept distinct because they signal a computation
that ran but produced self-contradictory results (e.g. a radicand that
should be nonnegative coming out clearly negative), and the CLI maps the
two categories to different exit codes.
"""


class QSpeedError(Exception):
    """Base class for package errors."""


class InvalidInputError(QSpeedError, ValueError):
    """Input violates a documented precondition (shape, symmetry, domain)."""


class DegenerateInputError(InvalidInputError):
    """Input is valid but degenerate for the requested operation
    (zero variance generator, zero mean spin, vanishing denominator)."""


class NumericalConsistencyError(QSpeedError, ArithmeticError):
    """An internal cross-check failed beyond tolerance."""
