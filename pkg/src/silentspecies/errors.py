"""Exception hierarchy shared across the package."""


class SilentSpeciesError(Exception):
    """Base class for all errors raised by silentspecies."""


class EmptyDataset(SilentSpeciesError):
    """No usable observations remain after dropping zero-count records."""


class SchemaError(SilentSpeciesError):
    """Malformed input data; the message names the offending row or field."""


class InsufficientSamples(SilentSpeciesError):
    """Incidence operation requires more distinct samples than provided."""


class SubsampleTooLarge(SilentSpeciesError):
    """Requested subsample size exceeds the number of available tokens."""


class InvalidSize(SilentSpeciesError):
    """Subsample size must be a positive integer."""


class DegenerateVariance(SilentSpeciesError):
    """Correlation input has zero variance in at least one vector."""


class InsufficientPoints(SilentSpeciesError):
    """Too few points to determine the requested polynomial fit."""


class InvalidSpec(SilentSpeciesError):
    """Synthetic population specification has invalid parameters."""
