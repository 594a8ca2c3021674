"""Exception types shared across the package."""


class TangledStringError(Exception):
    """Base class for all errors raised by this package."""


class EmptySequenceError(TangledStringError):
    """Raised when a sequence with no events is constructed or tangled."""


class EmptyBasketError(TangledStringError):
    """Raised when a basket contains no items.

    ``basket`` is the zero-based ordinal of the offending basket when the
    sequence was built in memory; ``line`` is the one-based input line when
    it came from a file.
    """

    def __init__(self, message: str, basket: int | None = None, line: int | None = None):
        super().__init__(message)
        self.basket = basket
        self.line = line


class ParseError(TangledStringError):
    """Raised on malformed input rows; carries the one-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyEvaluationError(TangledStringError):
    """Raised when an evaluation is requested but no change points exist."""
