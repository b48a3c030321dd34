"""Exception hierarchy shared by all treebench modules."""


class WorkbenchError(Exception):
    """Base class for every error raised by this package."""


class InputError(WorkbenchError):
    """Malformed input data: letters out of range, invalid partitions, bad parameters."""


class ModeMismatchError(WorkbenchError):
    """Two values from incompatible modes (or alphabets) were combined."""


class DomainError(WorkbenchError):
    """An operation was applied outside its mathematical domain."""


class NeedsRationalT(DomainError):
    """A truncated evaluation needs a numeric value of t but got a symbolic one."""


class ParseError(WorkbenchError):
    """Syntax error with position and expected-token information."""

    def __init__(self, message: str, position: int | None = None, expected: str | None = None):
        self.position = position
        self.expected = expected
        detail = message
        if position is not None:
            detail += f" (at position {position}"
            if expected:
                detail += f", expected {expected}"
            detail += ")"
        elif expected:
            detail += f" (expected {expected})"
        super().__init__(detail)
