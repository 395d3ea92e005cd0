"""Exact checks of Picard-group maps between trees of curves at infinity."""

from .exact_arith import (
    Poly, QuadScalar, gcd_univariate, jacobian, multiplicity_profile,
    order_in_variable, squarefree_decomposition, substitute,
)
from .expr import parse_poly

__version__ = "0.1.0"
