"""Assur decomposition of pinned bar-and-joint frameworks."""

__version__ = "0.1.0"
