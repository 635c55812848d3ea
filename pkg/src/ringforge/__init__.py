"""Exact finite-ring and polynomial-ideal workbench for closedness and polygon obstructions."""

__version__ = "0.1.0"
