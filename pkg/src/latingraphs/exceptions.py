class LatinSquareError(ValueError):
    """Raised when an array fails the Latin property.

    ``where`` holds ``("row" | "column", index, col_or_row_index)`` of the first
    violation when one was located.
    """

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class CapExceededError(ValueError):
    """An exact routine was asked to run beyond its size cap."""


class ParseError(ValueError):
    """Malformed input file; ``line`` is 1-based."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ChecksumError(ValueError):
    pass
