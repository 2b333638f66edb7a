"""Deterministic election tallying, seat apportionment and voting-criteria audits."""

__version__ = "0.1.0"
