"""Invariants of solvable Lie algebras via the coadjoint representation."""

__version__ = "0.1.0"
