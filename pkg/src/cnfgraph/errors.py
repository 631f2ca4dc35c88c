"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates a documented precondition."""


class CapExceeded(RuntimeError):
    """A configured size cap would be exceeded."""
