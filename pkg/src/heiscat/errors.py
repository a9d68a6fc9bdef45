"""Exception taxonomy shared across the package.

InputError covers malformed or out-of-range arguments, ParseError adds a
source position, ResourceError signals a configured cap was exceeded, and
ReductionError reports a rewriting run that exhausted its fuel (always an
engine bug, never silently accepted).
"""


class InputError(ValueError):
    """Malformed or out-of-range input."""


class ParseError(InputError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ResourceError(RuntimeError):
    """A configured resource cap (dimension, factorial size) was exceeded."""


class ReductionError(RuntimeError):
    """Diagram rewriting exhausted its fuel; carries the stuck state."""

    def __init__(self, message: str, stuck=None):
        super().__init__(message)
        self.stuck = stuck
