"""Exceptions shared across the package."""


class ResourceCapError(RuntimeError):
    """A size cap or search budget was exceeded (CLI exit code 3)."""


class EmptySliceError(ValueError):
    """A family has no members of the requested order, so nothing can be sampled."""
