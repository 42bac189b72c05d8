"""Exact arithmetic kernel: rationals, Gaussian rationals, sparse polynomials, linear algebra."""

from .scalars import GaussRational, Rational, as_rational
from .poly import (
    DiffOp,
    NotAPerfectSquare,
    ParamPoly,
    SparsePoly,
    VariableCountMismatch,
    poly_sqrt,
)
from .linalg import (
    ImageNotInSpan,
    LinearCoordinates,
    exact_nullspace,
    matrix_rank,
    solve_linear,
)

__all__ = [
    "GaussRational",
    "Rational",
    "as_rational",
    "DiffOp",
    "NotAPerfectSquare",
    "ParamPoly",
    "SparsePoly",
    "VariableCountMismatch",
    "poly_sqrt",
    "ImageNotInSpan",
    "LinearCoordinates",
    "exact_nullspace",
    "matrix_rank",
    "solve_linear",
]
