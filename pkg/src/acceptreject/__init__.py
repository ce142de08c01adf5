"""Exact accept-reject uncertainty models over finite possibility spaces."""

__version__ = "0.1.0"
