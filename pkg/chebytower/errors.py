"""
Exceptions raised by chebytower.

Each class carries the exit code the command-line front end returns for it,
so library code can raise plain ``ValueError`` / ``ArithmeticError`` /
``RuntimeError`` subclasses and the CLI maps them without a lookup table.
"""


class ChebytowerError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class DomainError(ChebytowerError, ValueError):
    """An argument lies outside the domain of the operation (bad n, k, j...)."""

    exit_code = 2


class ConsistencyError(ChebytowerError, ArithmeticError):
    """Two exact computations that must agree did not."""

    exit_code = 3


class ResourceGuardError(ChebytowerError, RuntimeError):
    """A configured degree or enumeration guard would be exceeded."""

    exit_code = 4

    def __init__(self, what: str, requested: int, limit: int):
        super().__init__(f"{what} {requested} exceeds the configured limit {limit}")
        self.what = what
        self.requested = requested
        self.limit = limit


class CacheError(ChebytowerError):
    """A cache file could not be trusted (schema, digest or content mismatch)."""
