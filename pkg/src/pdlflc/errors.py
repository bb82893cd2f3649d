"""Exception hierarchy shared by all modules."""


class InputError(ValueError):
    """Malformed or inconsistent input (unknown state, foreign letter, ...)."""


class ParseError(InputError):
    """Syntax error in one of the text formats."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class ResourceError(RuntimeError):
    """A configured size cap was exceeded."""


class BoundTooSmall(InputError):
    """A search bound was too small to produce a verified answer."""
