"""AI-assisted JSON Schema creation, editing, and deterministic data mapping."""

__version__ = "0.1.0"
