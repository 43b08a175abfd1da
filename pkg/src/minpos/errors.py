"""Exception hierarchy shared by every module."""


class MinposError(Exception):
    """Base class for all library errors."""


class ParseError(MinposError, ValueError):
    """Malformed numeric text."""


class DomainError(MinposError, ValueError):
    """An argument violates a mathematical precondition."""


class ResourceError(MinposError, RuntimeError):
    """Exact computation outgrew its configured size cap."""


class PrecisionError(MinposError, RuntimeError):
    """A requested enclosure width could not be reached."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class BracketFailure(PrecisionError):
    """Doubling search for an upper bracket ran past its limit."""


class InconsistencyError(MinposError, AssertionError):
    """Two independent computations of the same quantity disagree."""
