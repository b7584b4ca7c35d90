class PreconditionError(ValueError):
    """Input violates a documented precondition."""


class CapExceeded(RuntimeError):
    """A configured search or enumeration cap was hit."""
