"""Errors shared across the library."""


class UniratError(Exception):
    """Base class for library errors."""


class UniverseMismatchError(UniratError):
    """Operands live over different variable universes or coefficient fields."""


class ZeroDenominatorError(UniratError, ZeroDivisionError):
    """A denominator evaluated or normalized to zero."""

    def __init__(self, message, binding=None):
        super().__init__(message)
        self.binding = binding


class InseparableInputError(UniratError):
    """Characteristic-p input violates a separability precondition."""


class BudgetExceededError(UniratError):
    """A configured step budget was exhausted; the computation is incomplete."""

    exit_code = 3


class NotAlgebraicError(UniratError):
    """The extension is transcendental where an algebraic one is required."""

    exit_code = 2


class IntegrityError(UniratError):
    """An internal cross-check failed; the inputs violate a documented precondition."""


class ParseError(UniratError):
    """Expression syntax error, annotated with a position."""

    exit_code = 4

    def __init__(self, message, line=1, column=0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SolveError(UniratError):
    """A polynomial system was not zero-dimensional where finitely many

    solutions were required."""
