"""Exception types shared across the package."""


class SepLabError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(SepLabError, ValueError):
    """A value violates a structural invariant (malformed graph, bad letter, ...)."""


class CapExceeded(SepLabError):
    """An exhaustive operation was refused because it exceeds the configured caps."""


class PreconditionError(SepLabError):
    """An operation was invoked on inputs that fail its stated precondition."""

    def __init__(self, message: str, payload=None):
        super().__init__(message)
        self.payload = payload
