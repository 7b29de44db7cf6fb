"""Kneser neighbours, Hecke operators and weight-enumerator filtrations for self-dual codes."""

__version__ = "0.1.0"
