"""Exception types raised by spherestats.

Every error derives from :class:`SphereStatsError`.  The CLI maps
:class:`DataError` subclasses to exit code 2 and :class:`NumericDegeneracy`
subclasses to exit code 3.
"""


class SphereStatsError(Exception):
    pass


class DataError(SphereStatsError, ValueError):
    """Input data or arguments that cannot be interpreted."""


class NumericDegeneracy(SphereStatsError, ArithmeticError):
    """A statistic is undefined for the given (valid) data."""


class ZeroVector(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class BadDimension(DataError):
    pass


class AngleOutOfRange(DataError):
    pass


class WrongHemisphere(DataError):
    pass


class NormTolerance(DataError):
    def __init__(self, row, norm):
        self.row = row
        self.norm = norm
        super().__init__(f"row {row}: vector norm {norm:.6g} is not within 1e-6 of 1")


class ParseError(DataError):
    def __init__(self, row, column, reason):
        self.row = row
        self.column = column
        self.reason = reason
        super().__init__(f"row {row}, column {column!r}: {reason}")


class KindMismatch(DataError):
    pass


class BadLevel(DataError):
    pass


class BadWindow(DataError):
    pass


class NotSymmetric(DataError):
    pass


class UndefinedMeanDirection(NumericDegeneracy):
    pass


class DegenerateTopEigenvalue(NumericDegeneracy):
    pass


class NonUniqueProjection(NumericDegeneracy):
    pass
