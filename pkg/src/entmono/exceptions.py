"""Exception types shared across the package."""


class EntmonoError(Exception):
    """Base class for package-specific errors."""


class NumericalIntegrityError(EntmonoError):
    """A computed quantity violates a bound by more than roundoff allows.

    Raised e.g. when a measure comes out more negative than the clamp
    tolerance, which indicates a bug rather than floating-point noise.
    """


class UnsupportedRouteError(EntmonoError):
    """No exact (or configured) computation route exists for the request."""
