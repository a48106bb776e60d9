"""Numerical laboratory for Schwarzian mechanics."""

__version__ = "0.1.0"
