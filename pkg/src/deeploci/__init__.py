"""Exact computations with braid varieties, Demazure weaves and their cluster charts."""

__version__ = "0.1.0"
