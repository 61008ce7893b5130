"""Exception hierarchy shared by the library and the CLI."""


class ChainError(Exception):
    """Base class for every error raised by :mod:`chainbn`."""


class InvalidInput(ChainError, ValueError):
    """Malformed or out-of-range input."""


class UnsupportedInput(ChainError, ValueError):
    """Input that is well formed but outside what an operation can handle.

    Typical cases: torsion-free loops handed to the rank oracle, or a
    Brill-Noether regime with ``g - d + r < 0``.
    """


class ParseError(InvalidInput):
    """Chain spec text that does not conform to the grammar."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class ConsistencyError(ChainError, RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""
