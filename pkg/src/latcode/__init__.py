"""Algebraic lattice codes for fading and MIMO channels."""

__version__ = "0.1.0"
