"""Exception hierarchy shared by every module."""


class LagjetError(Exception):
    """Base class for all errors raised by this package."""


class BackendMismatchError(LagjetError, TypeError):
    pass


class BasePointMismatchError(LagjetError, ValueError):
    pass


class InsufficientOrderError(LagjetError, ValueError):
    """An operation needed more derivative levels than the jet carries."""


class JetZeroDivisionError(LagjetError, ZeroDivisionError):
    pass


class DomainError(LagjetError, ValueError):
    """Expression evaluated outside its domain (log of a nonpositive value, ...)."""


class NonRationalError(LagjetError, ValueError):
    """The exact backend was asked for a value that is not rational."""


class ParseError(LagjetError, ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class PoleError(LagjetError, ValueError):
    pass


class RadiusError(LagjetError, ValueError):
    """A series was requested outside the disk where convergence is certified."""


class DivergenceError(LagjetError, ArithmeticError):
    pass


class ConvergenceError(LagjetError, ArithmeticError):
    """An iterative solver did not reach its tolerance."""


class BoundViolation(LagjetError, AssertionError):
    """A proven inequality was observed to fail."""
