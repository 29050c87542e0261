"""Exception hierarchy shared by every module."""


class LensError(Exception):
    """Base class for all errors raised by deltalens."""


class PreconditionError(LensError, ValueError):
    """An operation was called outside its domain (unknown id, wrong source, ...)."""


class FootMismatch(PreconditionError):
    """Two lenses or multilenses do not meet at the same category."""


class BoundExceeded(LensError):
    """An exhaustive enumeration or search would exceed its configured bound."""


class NotFunctorial(LensError):
    """A supplied put rule does not define a functor on the apex category."""


class FusionError(LensError):
    """The two candidate middle legs of a fusion disagree."""


class ParseError(LensError):
    """Malformed input text, with the position of the first problem."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line, self.column = line, column
