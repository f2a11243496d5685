"""Exception types raised across the package."""


class AmeError(ValueError):
    """Base class for all package errors."""


class DomainError(AmeError):
    """An argument lies outside the domain of an operation."""


class UnsupportedError(AmeError):
    """The operation is not implemented for the requested parameters."""


class NumericalValidityError(AmeError):
    """A numerical object violates an invariant by more than the tolerance."""
