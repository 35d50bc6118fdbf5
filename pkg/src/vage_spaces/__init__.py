"""Exact truncated computation in convolution rings over free commutative monoids."""

__version__ = "0.3.0"
