"""Shared exception types for the uplogic package."""


class UplogicError(Exception):
    """Base class for all errors raised by this package."""


class InputError(UplogicError):
    """A caller-supplied value violates an operation's precondition."""


class ValidationError(UplogicError):
    """A loaded document violates a structural invariant."""


class ResourceError(UplogicError):
    """A configured size cap or search budget was exceeded."""


class InternalCheckError(UplogicError):
    """An internal self-check failed; indicates a bug, never bad input."""
