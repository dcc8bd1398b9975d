"""Exception hierarchy shared by every module."""


class MmesError(Exception):
    """Base class for errors raised by this package."""


class ConfigurationError(MmesError):
    """Raised for invalid run configuration (sizes, caps, topologies)."""


class UsageError(MmesError, ValueError):
    """Raised when an operation is called with arguments that violate its contract."""


class IntegrityError(MmesError):
    """Raised when a genome or encoded circuit is corrupt."""


class NumericalIntegrityError(MmesError):
    """Raised when a numerical invariant (trace, positivity) is violated."""
