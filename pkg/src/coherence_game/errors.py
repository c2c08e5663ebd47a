"""Exception types raised across the package."""


class CoherenceGameError(Exception):
    """Base class for all package errors."""


class ConfigurationError(CoherenceGameError, ValueError):
    """A size or range parameter is outside its supported domain."""


class ValidationError(CoherenceGameError, ValueError):
    """An input object violates its invariants (normalization, unitarity, ...)."""


class UnsupportedOccupancyError(CoherenceGameError):
    """An operation would leave the binary-occupancy regime."""


class SuperselectionError(CoherenceGameError):
    """A requested measurement is forbidden by the parity superselection rule."""
