"""Common exception base for the package."""


class ShelfwiseError(Exception):
    """Base class for all shelfwise domain errors."""
