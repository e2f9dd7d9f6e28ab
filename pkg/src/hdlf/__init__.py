"""Arithmetic of higher-dimensional local fields."""

__version__ = "0.1.0"
