"""Shared exception types."""


class InputError(ValueError):
    """An argument violates a documented precondition."""


class ResourceLimitError(RuntimeError):
    """An enumeration or completion exceeded its configured cap."""
