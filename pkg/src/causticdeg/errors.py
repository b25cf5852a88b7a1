"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class CausticError(Exception):
    """Base class for all errors raised by this package."""


class DivisionByZero(CausticError, ZeroDivisionError):
    pass


class ZeroDivisorEncountered(CausticError):
    """A non-invertible, non-zero element was met in a tower level.

    ``tower`` is the level whose defining polynomial must be split and
    ``witness`` a proper monic factor of it (coefficients over the parent).
    """

    def __init__(self, tower, witness):
        self.tower = tower
        self.witness = tuple(witness)
        super().__init__(
            f"zero divisor at tower level {tower.height}: "
            f"factor of degree {len(self.witness) - 1} found"
        )


class IncompatibleTowers(CausticError):
    pass


class ConstantPolynomial(CausticError):
    pass


class DegreeTooLow(CausticError):
    pass


class ZeroVector(CausticError):
    pass


class ZeroPolynomial(CausticError):
    pass


class EqualPoints(CausticError):
    pass


class NonSquarefreeInput(CausticError):
    pass


class CurveContained(CausticError):
    pass


class TruncationTooSmall(CausticError):
    pass


class NegativeClass(CausticError):
    pass


class UnmatchedCase(CausticError):
    pass


class RouteDisagreement(CausticError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class GenericityExhausted(CausticError):
    pass


class UndefinedReflection(CausticError):
    pass


class NotHomogeneous(CausticError):
    def __init__(self, degrees):
        self.degrees = sorted(degrees)
        super().__init__(f"polynomial is not homogeneous: degrees {self.degrees}")


class ParseError(CausticError, SyntaxError):
    """Syntax error in a polynomial or point expression, with a 0-based position."""

    def __init__(self, message, position, text=""):
        self.position = position
        self.text_input = text
        super().__init__(f"{message} at position {position}")
