class CsfsError(Exception):
    """Base class for errors raised by this package."""


class DataError(CsfsError, ValueError):
    """Input data or an artifact violates a precondition."""


class UsageError(CsfsError):
    """Invalid command-line usage."""
