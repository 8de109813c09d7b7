"""Exception hierarchy shared by the library and the CLI."""


class TriadicError(Exception):
    """Base class for all errors raised by this package."""


class IngestionError(TriadicError, ValueError):
    """Malformed edge-list input.

    ``line`` is the 1-based line number for text input, or the 0-based
    offset of the offending pair for in-memory input.
    """

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class UndefinedValueError(TriadicError, ArithmeticError):
    """A statistic with a zero denominator was requested."""


class NoWedgesError(UndefinedValueError):
    def __init__(self, wtype):
        super().__init__(f"graph has no wedges of type {wtype.label!r}")
        self.wtype = wtype


class IncompatibleTypesError(TriadicError, ValueError):
    """The wedge type never occurs in the requested triangle type."""


class NotATriangleError(TriadicError, ValueError):
    pass


class SizeCapError(TriadicError, ValueError):
    pass
