"""Exception types shared across the package."""


class CubedomError(Exception):
    """Base class for errors raised by cubedom."""


class LengthMismatch(CubedomError, ValueError):
    pass


class OutOfRange(CubedomError, ValueError):
    pass


class ResourceRefusal(CubedomError):
    """Raised when a request would exceed the configured memory/search limits."""

    def __init__(self, message: str, required_bytes: int | None = None):
        super().__init__(message)
        self.required_bytes = required_bytes


class AdmissibilityError(CubedomError, ValueError):
    pass


class InvariantViolation(CubedomError, AssertionError):
    pass
