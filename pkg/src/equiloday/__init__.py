"""Exact simplicial equivariant rings over finite groups."""

__version__ = "0.1.0"
