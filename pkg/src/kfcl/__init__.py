"""Combinatorial verification toolkit for Ky Fan's covering lemma and its multi-order versions."""

__version__ = "0.1.0"
