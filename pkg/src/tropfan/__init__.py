"""Exact computations with tropical fans: balancing, Chow rings, modifications."""

__version__ = "0.1.0"
