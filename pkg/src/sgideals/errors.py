class SemigroupError(Exception):
    """Base class for errors raised by this package."""


class SizeLimitError(SemigroupError):
    """A closure or table would exceed the configured cap."""


class PreconditionError(SemigroupError, ValueError):
    """An operation was called outside its domain of validity."""


class InvariantViolation(SemigroupError):
    """A cross-check between two independent routes disagreed."""
