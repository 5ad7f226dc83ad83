"""Exact symbolic-numeric engine for Abelian functions on cyclic trigonal curves."""

__version__ = "0.1.0"
