"""Dense exact matrices as numpy object arrays of Python ints/Fractions."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .linalg import exact_nullspace, matrix_rank
from .scalars import GaussRational

__all__ = ["to_object", "integerize", "exact_matmul", "kernel", "rank", "identity"]


def to_object(rows: Sequence[Sequence]) -> np.ndarray:
    a = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            a[i, j] = v
    return a


def identity(n: int) -> np.ndarray:
    a = np.zeros((n, n), dtype=object)
    for i in range(n):
        a[i, i] = 1
    return a


def integerize(a: np.ndarray) -> tuple[np.ndarray, int]:
    """Return ``(A, D)`` with ``A`` integral and ``a = A / D``.

    Only rational entries are supported.
    """
    den = 1
    for v in a.flat:
        if isinstance(v, Fraction):
            den = den * v.denominator // math.gcd(den, v.denominator)
        elif isinstance(v, GaussRational):
            raise TypeError("integerize supports rational matrices only")
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        out[idx] = int(v * den)
    return out, den


def exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product; rational inputs are scaled to integers first."""
    try:
        ia, da = integerize(a)
        ib, db = integerize(b)
    except TypeError:
        return np.dot(a, b)
    prod = np.dot(ia, ib)
    d = da * db
    if d == 1:
        return prod
    out = np.empty(prod.shape, dtype=object)
    for idx, v in np.ndenumerate(prod):
        q = Fraction(v, d)
        out[idx] = q.numerator if q.denominator == 1 else q
    return out


def _rows(a: np.ndarray) -> list[dict]:
    return [{j: v for j, v in enumerate(row) if v} for row in a]


def kernel(a: np.ndarray) -> list[dict]:
    """Exact right kernel as sparse column-index vectors."""
    return exact_nullspace(_rows(a), list(range(a.shape[1])))


def rank(a: np.ndarray) -> int:
    return matrix_rank(_rows(a), list(range(a.shape[1])))
