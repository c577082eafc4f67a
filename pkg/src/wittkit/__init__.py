"""Exact computations with Galois-module cohomology, pointed braided fusion
categories, Frobenius-Perron dimensions and quadratic Galois descent."""

__version__ = "0.1.0"
