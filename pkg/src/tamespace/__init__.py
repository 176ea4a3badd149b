"""Monomial valuations under tame polynomial automorphisms."""

from .field_poly import GF, QQ, Polynomial, parse_polynomial
from .kernels import BACKEND

__all__ = ["GF", "QQ", "Polynomial", "parse_polynomial", "BACKEND"]
__version__ = "0.1.0"
