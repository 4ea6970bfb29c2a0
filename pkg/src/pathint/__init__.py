"""Numerical laboratory for regularized path integrals."""

__version__ = "0.1.0"
