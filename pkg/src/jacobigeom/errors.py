"""Exception hierarchy shared by every layer of the package."""


class GeometryError(Exception):
    """Base class for all package errors."""


# scalar core
class DivisionByZeroFunction(GeometryError, ZeroDivisionError):
    pass


class UnknownCoordinate(GeometryError, KeyError):
    pass


class DenominatorVanishes(GeometryError, ZeroDivisionError):
    pass


class SingularMatrix(GeometryError):
    pass


class InconsistentSystem(GeometryError):
    pass


# tensor calculus
class ChartMismatch(GeometryError):
    pass


# line bundle calculus
class CoordinateClash(GeometryError):
    pass


# omni-Lie algebroid layer
class NotClosed(GeometryError):
    pass


class NotInProjection(GeometryError):
    pass


class RankDeficient(GeometryError):
    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class CleanIntersectionFailed(GeometryError):
    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class PreconditionNotMaximalIsotropic(GeometryError):
    pass


# structures
class NotAlmostComplex(GeometryError):
    pass


class NotGeneralizedComplex(GeometryError):
    pass


class PreconditionFailed(GeometryError):
    pass


class Degenerate(GeometryError):
    pass


class NotFlat(GeometryError):
    pass


class UnknownName(GeometryError, KeyError):
    pass


# holomorphic layer
class NotHoloChart(GeometryError):
    pass


# document language
class DSLSyntaxError(GeometryError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class UnknownIdentifier(GeometryError, KeyError):
    pass
