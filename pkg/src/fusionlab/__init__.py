"""Materialized fusion systems of small permutation groups."""
__version__ = "0.1.0"
