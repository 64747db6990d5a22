"""Shared exception hierarchy."""


class SchemaForgeError(Exception):
    """Base class for every error raised by this package."""
