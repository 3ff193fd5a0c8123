"""Exception hierarchy shared by all dispersia modules."""


class DispersiaError(Exception):
    """Base class for every error raised by the library."""


class DomainError(DispersiaError, ValueError):
    """An argument lies outside the domain of the operation (e.g. negative frequency)."""


class CausalityViolation(DispersiaError, ValueError):
    """Clausius-Mosotti gate failed: ``eta * alpha(0) / 3`` must stay below one.

    The offending gate value is kept in :attr:`value`.
    """

    def __init__(self, value, message=None):
        self.value = float(value)
        if message is None:
            message = (f"causality gate violated: eta*alpha(0)/(3 eps0) = {self.value!r} "
                       "(must be < 1)")
        super().__init__(message)


class QuadratureError(DispersiaError, ArithmeticError):
    """An integral did not reach its requested tolerance.

    :attr:`result` holds the best estimate that was reached, so callers can still
    report it (flagged as unconverged).
    """

    def __init__(self, message, result=None):
        self.result = result
        super().__init__(message)


class SingularSystem(DispersiaError, ArithmeticError):
    """The discretized Dyson system is (numerically) singular."""

    def __init__(self, condition, message=None):
        self.condition = float(condition)
        if message is None:
            message = f"Dyson system is singular (condition estimate {self.condition:.3e})"
        super().__init__(message)


class SeparationTooSmall(DispersiaError, ValueError):
    """Two voxel bodies are closer than the minimum separation for the crossing term."""


class ParseError(DispersiaError, ValueError):
    """A scenario file is not well-formed structured text."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class ValidationError(DispersiaError, ValueError):
    """A scenario parsed but failed validation; :attr:`errors` lists every problem found."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
