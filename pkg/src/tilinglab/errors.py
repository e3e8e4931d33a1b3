class InputError(ValueError):
    """Raised when arguments violate an operation's preconditions."""


class ResourceLimitError(RuntimeError):
    """Raised when an enumeration or search exceeds its configured cap."""

    def __init__(self, message, cap=None):
        super().__init__(message)
        self.cap = cap
