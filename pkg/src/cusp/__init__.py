"""Exact integral-affine construction of Type III anticanonical pairs from cusp recipes."""

__version__ = "0.1.0"
