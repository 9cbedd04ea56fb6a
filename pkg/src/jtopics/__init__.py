"""Topic classification of UK summary judgment cases against a functional legal taxonomy."""

__version__ = "0.1.0"
