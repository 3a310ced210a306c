"""Accelerated zeta series as infinite products of Gosper-group matrices."""

__version__ = "0.1.0"
