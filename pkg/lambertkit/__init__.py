"""Exact factorization matrices for generalized Lambert series."""

__version__ = "0.1.0"
