"""Executable Herbrand realizability over a combinatory term model."""

__version__ = "0.1.0"
