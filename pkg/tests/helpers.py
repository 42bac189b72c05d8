"""Shared, cached constructions for the test modules."""

from functools import lru_cache

from capelli.diffop import operator_matrix
from capelli.ktypes import build_equivariant_space


@lru_cache(maxsize=None)
def space_and_matrix(d, n, r, m, l=1):
    sp = build_equivariant_space(d, n, r, m)
    return sp, operator_matrix(sp, l=l, method="auto")
