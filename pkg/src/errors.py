from __future__ import annotations


class PirArrayError(Exception):
    """Base for every error raised by this package."""


class DimensionError(PirArrayError, ValueError):
    """Width or shape mismatch between vectors, cells or documents."""


class FormatError(PirArrayError, ValueError):
    """A code, certificate or Steiner document could not be parsed."""


class ParameterError(PirArrayError, ValueError):
    """Parameters fall outside a family's stated domain."""


class UnsupportedParameters(ParameterError):
    pass


class DesignError(PirArrayError, ValueError):
    """A block list is not a Steiner system."""


class CapacityError(PirArrayError):
    """A construction would exceed the configured server cap."""


class ConstructionInvariantError(PirArrayError, AssertionError):
    """Internal assertion: balancing, regularity or matching failed at build time."""


class RecoveryError(PirArrayError):
    """A recovery set's stored words do not determine the requested part."""
