"""Exact linear algebra over Q and Q(i) on sparse row vectors.

Vectors are ``dict[column -> coefficient]``.  Over Q the elimination is
fraction-free: rows are kept as primitive integer vectors and combined as
``p*row - a*pivot_row``.  Over Q(i) ordinary field elimination is used.
The reduced row echelon form is unique for a fixed column order, so the
nullspace basis does not depend on the order (or scaling) of the input rows.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .scalars import GaussRational, simplify_scalar

__all__ = [
    "ImageNotInSpan",
    "exact_nullspace",
    "matrix_rank",
    "row_echelon",
    "LinearCoordinates",
    "solve_linear",
    "inverse",
]


class ImageNotInSpan(ValueError):
    """A vector expected to lie in a span does not."""


def _is_rational_rows(rows) -> bool:
    for r in rows:
        for v in r.values():
            if isinstance(v, GaussRational) and v.im != 0:
                return False
    return True


def _to_primitive(row: dict) -> dict:
    """Scale a rational row to a primitive integer row with positive leading entry."""
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = den * v.denominator // math.gcd(den, v.denominator)
        elif isinstance(v, GaussRational):
            den = den * v.re.denominator // math.gcd(den, v.re.denominator)
    ints = {}
    g = 0
    for k, v in row.items():
        if isinstance(v, GaussRational):
            v = v.re
        iv = int(v * den)
        ints[k] = iv
        g = math.gcd(g, iv)
    lead = min(ints)
    if ints[lead] < 0:
        g = -g
    return {k: v // g for k, v in ints.items()}


def _int_reduce(row: dict, piv: dict, col) -> dict:
    a = row[col]
    p = piv[col]
    g = math.gcd(a, p)
    ma, mp = p // g, a // g
    out = {k: ma * v for k, v in row.items()}
    for k, v in piv.items():
        nv = out.get(k, 0) - mp * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    if not out:
        return out
    g = 0
    for v in out.values():
        g = math.gcd(g, v)
        if g == 1:
            break
    if g > 1:
        out = {k: v // g for k, v in out.items()}
    return out


def _field_reduce(row: dict, piv: dict, col) -> dict:
    a = row[col]
    out = dict(row)
    for k, v in piv.items():
        nv = out.get(k, 0) - a * v
        if nv:
            out[k] = simplify_scalar(nv)
        else:
            out.pop(k, None)
    return out


def _field_normalize(row: dict) -> dict:
    lead = min(row)
    inv = 1 / (Fraction(row[lead]) if isinstance(row[lead], int) else row[lead])
    return {k: simplify_scalar(v * inv) for k, v in row.items()}


def row_echelon(rows: Iterable[dict], columns: Sequence[Hashable] | None = None):
    """Reduced row echelon form.

    Returns ``(pivots, index)`` where ``pivots`` maps a column position to its
    reduced row (a dict over column positions, pivot entry 1, exact
    Fractions/GaussRationals) and ``index`` maps column keys to positions.
    """
    rows = [r for r in rows if r]
    if columns is None:
        keys = set()
        for r in rows:
            keys.update(r)
        columns = sorted(keys)
    index = {c: i for i, c in enumerate(columns)}
    prow = []
    for r in rows:
        pr = {}
        for k, v in r.items():
            if v:
                if k not in index:
                    raise KeyError(f"column {k!r} not in the declared column set")
                pr[index[k]] = v
        if pr:
            prow.append(pr)
    rational = _is_rational_rows(prow)
    pivots: dict[int, dict] = {}
    if rational:
        for r in prow:
            row = _to_primitive(r)
            while row:
                lead = min(row)
                piv = pivots.get(lead)
                if piv is None:
                    if row[lead] < 0:
                        row = {k: -v for k, v in row.items()}
                    pivots[lead] = row
                    break
                row = _int_reduce(row, piv, lead)
        # back substitution, then normalise pivots to 1
        order = sorted(pivots, reverse=True)
        for i, c in enumerate(order):
            piv = pivots[c]
            for c2 in order[i + 1:]:
                r2 = pivots[c2]
                if c in r2:
                    pivots[c2] = _int_reduce(r2, piv, c)
        out = {}
        for c, row in pivots.items():
            p = row[c]
            out[c] = {k: simplify_scalar(Fraction(v, p)) for k, v in row.items()}
        return out, index
    for r in prow:
        row = _field_normalize(r)
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = row
                break
            row = _field_reduce(row, piv, lead)
            if row:
                row = _field_normalize(row)
    order = sorted(pivots, reverse=True)
    for i, c in enumerate(order):
        piv = pivots[c]
        for c2 in order[i + 1:]:
            r2 = pivots[c2]
            if c in r2:
                pivots[c2] = _field_reduce(r2, piv, c)
    return pivots, index


def matrix_rank(rows: Iterable[dict], columns: Sequence[Hashable] | None = None) -> int:
    pivots, _ = row_echelon(rows, columns)
    return len(pivots)


def exact_nullspace(rows: Iterable[dict], columns: Sequence[Hashable]) -> list[dict]:
    """Basis of the joint kernel of the linear functionals ``rows``.

    Each row maps column keys to coefficients; ``columns`` fixes the column
    order (and hence the canonical basis).  Over Q every basis vector is a
    primitive integer vector; over Q(i) the free coordinate is 1.
    """
    columns = list(columns)
    rows = list(rows)
    pivots, index = row_echelon(rows, columns)
    rational = _is_rational_rows(rows)
    basis = []
    for f in range(len(columns)):
        if f in pivots:
            continue
        vec = {f: 1}
        for c, row in pivots.items():
            v = row.get(f)
            if v:
                vec[c] = -v
        if rational:
            vec = _to_primitive(vec)
            # sign: positive at the free coordinate
            if vec[f] < 0:
                vec = {k: -v for k, v in vec.items()}
        basis.append({columns[k]: v for k, v in sorted(vec.items())})
    return basis


def inverse(m: Sequence[Sequence]) -> list[list]:
    """Inverse of a square exact matrix (Gauss-Jordan)."""
    n = len(m)
    a = [[Fraction(x) if isinstance(x, int) else x for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [[simplify_scalar(x) for x in row[n:]] for row in a]


def solve_linear(a: Sequence[Sequence], b: Sequence) -> list:
    """Solve the square system ``a x = b`` exactly."""
    inv = inverse(a)
    return [simplify_scalar(sum((x * y for x, y in zip(row, b)), Fraction(0))) for row in inv]


class LinearCoordinates:
    """Coordinates with respect to a fixed list of linearly independent vectors.

    The pivot columns of the basis (as rows) select an invertible square
    submatrix; coordinates are read off there and then checked against the full
    vector, so a target outside the span raises :class:`ImageNotInSpan`.
    """

    def __init__(self, basis: Sequence[dict]):
        self.basis = list(basis)
        keys = set()
        for v in self.basis:
            keys.update(v)
        self.columns = sorted(keys)
        pivots, index = row_echelon(self.basis, self.columns)
        if len(pivots) != len(self.basis):
            raise ValueError("basis vectors are linearly dependent")
        self.pivot_columns = [self.columns[c] for c in sorted(pivots)]
        sub = [[v.get(c, 0) for v in self.basis] for c in self.pivot_columns]
        self._inv = inverse(sub)
        self._colset = set(self.columns)

    def __len__(self):
        return len(self.basis)

    def coordinates(self, target: dict, check: bool = True) -> list:
        rhs = [target.get(c, 0) for c in self.pivot_columns]
        coords = [simplify_scalar(sum((x * y for x, y in zip(row, rhs)), Fraction(0))) for row in self._inv]
        if check:
            recon: dict = {}
            for a, v in zip(coords, self.basis):
                if a:
                    for k, x in v.items():
                        recon[k] = recon.get(k, 0) + a * x
            for k in set(recon) | set(target):
                if recon.get(k, 0) != target.get(k, 0):
                    raise ImageNotInSpan(f"vector not in span (mismatch at column {k!r})")
        return coords
