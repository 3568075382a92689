"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands live in phase spaces of different dimension."""


class PreconditionError(ValueError):
    """An input violates the documented precondition of an operation.

    ``witness`` optionally carries the object that demonstrates the failure
    (for instance the nonzero Lie derivative of a non-invariant polynomial).
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(ValueError):
    """Syntax or semantic error in a problem file."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class IntegrationError(RuntimeError):
    """The implicit step failed to converge."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step
