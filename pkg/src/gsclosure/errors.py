"""Exception hierarchy shared by all modules."""


class TowerError(Exception):
    """Base class for every error raised by this package."""


class NotOddPrime(TowerError, ValueError):
    pass


class DegreeTooLarge(TowerError, ValueError):
    pass


class WrongDegree(TowerError, ValueError):
    pass


class FieldMismatch(TowerError, TypeError):
    pass


class DivisionByZero(TowerError, ZeroDivisionError):
    pass


class PoleAtInput(TowerError, ZeroDivisionError):
    """A rational function was evaluated where its denominator vanishes."""

    def __init__(self, message, denominator=None):
        super().__init__(message)
        self.denominator = denominator


class ZeroDivisor(TowerError, ZeroDivisionError):
    pass


class CyclicDependency(TowerError, ValueError):
    pass


class UnsupportedReducedLevel(TowerError, ValueError):
    pass


class BetaNotTraceZero(TowerError, ValueError):
    pass


class BetaZero(TowerError, ValueError):
    pass


class VectorTooShort(TowerError, ValueError):
    pass


class NoSplitFiber(TowerError, ValueError):
    pass


class LevelTooSmall(TowerError, ValueError):
    pass


class DegreeTooSmall(TowerError, ValueError):
    pass


class NotConstant(TowerError, ArithmeticError):
    pass


class NotTraceZero(TowerError, ArithmeticError):
    pass


class ParseError(TowerError, ValueError):
    pass


class PreconditionError(TowerError, ValueError):
    """Arguments outside the documented domain of an operation."""
