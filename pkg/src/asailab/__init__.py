"""Asai L-factors of ordinary GL(2) representations over quadratic extensions of Q_p."""

__version__ = "0.1.0"
