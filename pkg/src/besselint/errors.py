"""Exception types shared across the library."""


class BesselIntError(Exception):
    """Base class for every error raised by this package."""


class InvalidDomain(BesselIntError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class InvalidOrder(InvalidDomain):
    """Bessel order not supported by the requested evaluation branch."""


class NonConvergence(BesselIntError, RuntimeError):
    """An iterative scheme exhausted its budget before reaching tolerance."""


class NotFound(BesselIntError, RuntimeError):
    """A bracketing search exhausted its range without finding a sign change."""
