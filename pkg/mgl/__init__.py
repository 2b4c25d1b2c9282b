"""Spectra of measure-geometric Laplacians."""

__version__ = "1.0.0"
