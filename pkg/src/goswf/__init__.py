"""Generalized oblate spheroidal wave functions for Jacobi weights."""

__version__ = "0.1.0"
