"""Planar orthogonal polynomials for truncated unitary matrices with a point charge."""

__version__ = '1.0.0'
