"""Exact computations around the colored Jones polynomials of the figure eight
knot and its cables: recurrences, A-polynomials and the AJ check."""

__version__ = "0.1.0"
