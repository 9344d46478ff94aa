"""Exception hierarchy shared by all borderforge modules."""


class BorderforgeError(Exception):
    """Base class for all domain errors raised by this package."""


class DimensionMismatch(BorderforgeError):
    """Two terms or points do not live in the same number of variables."""


class ZeroInverse(BorderforgeError):
    """Multiplicative inverse of 0 requested."""


class NotPrime(BorderforgeError):
    """The field modulus is not a prime in the supported range."""


class NotAnOrderIdeal(BorderforgeError):
    """A term set expected to be divisibility-closed is not."""


class DuplicateLeadingTerm(BorderforgeError):
    """Insertion would violate the echelon property of a reducer set."""


class MissingBorderGenerator(BorderforgeError):
    """Final reduction found a border term with no matching generator."""


class DegreeBudgetExceeded(BorderforgeError):
    """The universe degree exceeded its cap; input is likely not zero-dimensional."""


class RankDeficient(BorderforgeError):
    """The evaluation matrix O(P) is singular; the point set must be resampled."""


class TooManyPoints(BorderforgeError):
    """More distinct points requested than the ambient space contains."""


class InvalidArity(BorderforgeError):
    """An operation requires at least two variables."""


class OracleUnavailable(BorderforgeError):
    """The external oracle transport failed; caller falls back to full expansion."""


class VariantDisagreement(BorderforgeError):
    """Two algorithm variants produced different bases on the same instance."""


class SchemaError(BorderforgeError):
    """A dataset line failed to parse or validate."""

    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number
