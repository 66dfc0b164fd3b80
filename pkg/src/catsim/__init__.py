"""Truncated Fock-space simulation of heralded cat-state preparation."""

__version__ = "0.1.0"
