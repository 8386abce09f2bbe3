"""Exact verification toolkit for Markoff-type K3 surfaces."""

__version__ = "0.1.0"
