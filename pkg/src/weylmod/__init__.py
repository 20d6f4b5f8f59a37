"""Numerical laboratory for the modular flow of free massless fermions on the unit double cone."""

__version__ = "0.1.0"
