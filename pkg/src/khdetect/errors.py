"""Exception hierarchy shared by every module."""


class KnotError(ValueError):
    """Base class for all input and computation errors raised by khdetect."""


class ParseError(KnotError):
    """Malformed text input. ``position`` is the 0-based offset of the problem."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class InvalidCharacter(ParseError):
    pass


class InvalidDT(KnotError):
    pass


class TooManyCrossings(KnotError):
    pass


class InvalidGauss(KnotError):
    pass


class NonRealizable(KnotError):
    """The DT sequence admits no planar diagram."""


class NotDivisible(KnotError):
    pass


class InvalidParameters(KnotError):
    pass


class ResourceLimitExceeded(KnotError):
    """A computation would exceed the configured crossing budget.

    ``progress`` carries whatever diagnostics were gathered before giving up.
    """

    def __init__(self, message, progress=None):
        self.progress = dict(progress or {})
        super().__init__(message)


class FormatError(KnotError):
    """Malformed census or invariant file. ``line`` is 1-based."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingInvariant(KnotError):
    def __init__(self, name, invariant):
        self.name = name
        self.invariant = invariant
        super().__init__(f"record {name!r} has no {invariant} polynomial")
