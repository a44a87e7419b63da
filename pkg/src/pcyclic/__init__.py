"""Tate cohomology, Yakovlev diagrams and counting bounds for lattices over cyclic p-groups."""

__version__ = "0.1.0"
