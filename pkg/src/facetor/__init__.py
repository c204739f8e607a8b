"""Exact computation of cohomology rings of toric spaces via Koszul complexes."""

__version__ = "0.1.0"
