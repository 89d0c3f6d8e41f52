"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument violates an operation's precondition."""


class ResourceError(RuntimeError):
    """A size cap or growth limit was exceeded; never silently truncated."""
