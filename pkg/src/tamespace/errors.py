class TamespaceError(Exception):
    """Base class for library errors."""


class PreconditionError(TamespaceError, ValueError):
    """An operation was called outside its domain."""


class DegreeCapExceeded(TamespaceError, ArithmeticError):
    """A substitution produced a polynomial above the configured degree cap."""


class BudgetExhausted(TamespaceError, RuntimeError):
    """A bounded search ran out of budget without an answer."""


class ParseError(TamespaceError, ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
