"""Exception types shared across the package."""


class CfkitError(Exception):
    """Base class for all cfkit errors."""


class DataError(CfkitError):
    """Malformed or inconsistent input data (CSV rows, labels, shape specs)."""


class NumericalError(CfkitError):
    """A numerical routine could not produce a usable result."""
