"""Tautological ring, zip oracle and Ekedahl-Oort class toolkit."""

__version__ = "0.1.0"
