"""Combinatorial engine for discrete self-similar graph data.

Builds truncated universal path/boundary spaces for a finite graph with a
self-similar group(oid) action, does exact inverse-semigroup and germ
arithmetic over them, and verifies the gauge relations (Toeplitz and
relative covariance) on finite matrix representations.
"""

__version__ = "0.1.0"
