"""Shared exception types."""


class InternalInvariantError(RuntimeError):
    """A mathematically guaranteed identity failed at runtime.

    This always signals an implementation bug (or corrupted input that
    slipped past validation), never a property of the input manifold.
    The command line maps it to exit code 3.
    """
