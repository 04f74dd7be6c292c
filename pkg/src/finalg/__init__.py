"""Finite-algebra workbench for inverse semigroups and additively idempotent semirings."""

__version__ = "0.1.0"
