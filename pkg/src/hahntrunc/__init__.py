"""Exact Hahn series with truncation, bounded monadic second-order evaluation,
and finite witnesses for the definability and dividing-line constructions."""

__version__ = "0.1.0"
