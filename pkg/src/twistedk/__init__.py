"""Exact twisted K-theory spectral sequences on finite complexes.

Integer, rational, Q(sqrt2) and Q/Z arithmetic throughout; every
formula-based differential is cross-checkable against a brute-force
filtered-complex oracle.
"""

__version__ = "0.1.0"
