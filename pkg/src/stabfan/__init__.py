"""Stability conditions and canonical decompositions for finite-dimensional quiver algebras."""

__version__ = "0.1.0"
