"""Errors for the mapping language; diagnostics render as line:col message."""

from __future__ import annotations

from ..errors import SchemaForgeError


def line_col(source: str, offset: int) -> tuple:
    """1-based (line, column) of a byte offset into source text."""
    offset = max(0, min(offset, len(source)))
    line = source.count("\n", 0, offset) + 1
    last_nl = source.rfind("\n", 0, offset)
    return line, offset - last_nl


class MappingError(SchemaForgeError):
    def __init__(self, message: str, span: tuple = (0, 0), source: str | None = None):
        self.span = span
        self.raw_message = message
        if source is not None:
            line, col = line_col(source, span[0])
            message = f"{line}:{col} {message}"
        super().__init__(message)


class MappingSyntaxError(MappingError):
    pass


class MappingEvalError(MappingError):
    pass


class MappingTypeError(MappingEvalError):
    pass


class MappingRuntimeError(MappingEvalError):
    """Division by zero, step budget, recursion depth."""
