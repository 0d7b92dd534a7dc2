"""
Exception hierarchy. Every error carries the exit code the CLI reports.
"""


class TorsionLabError(Exception):
    """Base class for all torsionlab errors."""

    exit_code = 2


class InvalidInputError(TorsionLabError, ValueError):
    """Malformed or out-of-range input supplied by the caller."""

    exit_code = 1


class DegreeConditionError(InvalidInputError):
    """The operator data violates sum l(w_i) = a + b."""

    def __init__(self, total_length, a, b):
        self.total_length = total_length
        self.a = a
        self.b = b
        super().__init__(
            f"Degree condition violated: sum l(w_i) = {total_length} but a + b = {a} + {b} = {a + b}"
        )


class VanishingOperatorError(InvalidInputError):
    """The operator word evaluates to zero, so there is nothing to certify."""


class IntegrityError(TorsionLabError):
    """Two independent computations of the same quantity disagree."""

    exit_code = 2


class ResourceCapError(TorsionLabError):
    """A configured resource cap was hit."""

    exit_code = 3
