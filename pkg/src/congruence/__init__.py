"""Canonical forms of square matrices under congruence and *congruence."""

__version__ = "0.1.0"
