"""Braid-group based noncommutative probability toolkit."""

__version__ = "0.1.0"
