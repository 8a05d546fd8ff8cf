"""Exact computations with A∞/L∞ algebras, homotopy transfer and the
enveloping A∞ algebra of an L∞ algebra, over the rationals."""

__version__ = "0.1.0"
