"""Matrices over R, C, H with polynomial components; Gram map, Jordan norm, Psi, nu.

Entries are ``d``-tuples of :class:`SparsePoly` along the real basis
``1, i, j, k`` of the division algebra.  Numeric matrices are the same objects
over zero variables, or numpy arrays of shape ``(rows, cols, d)`` for the
float routines.

The quaternion-to-complex embedding is fixed once:
``a + b i + c j + d k  ->  [[a + b i, c + d i], [-c + d i, a - b i]]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exactcore import SparsePoly, poly_sqrt

__all__ = [
    "DivisionAlgebra",
    "R",
    "C",
    "H",
    "algebra",
    "AlgPolyMatrix",
    "NonHermitianInput",
    "SingularMatrix",
    "gram",
    "jordan_det",
    "moore_det",
    "embedding_det",
    "complex_embedding",
    "psi",
    "nu",
    "dnu",
    "quat_mul",
    "components_to_complex",
    "complex_to_components",
]


class NonHermitianInput(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


@dataclass(frozen=True)
class DivisionAlgebra:
    tag: str
    d: int

    def __post_init__(self):
        if {"R": 1, "C": 2, "H": 4}.get(self.tag) != self.d:
            raise ValueError(f"dimension {self.d} does not match {self.tag}")


R = DivisionAlgebra("R", 1)
C = DivisionAlgebra("C", 2)
H = DivisionAlgebra("H", 4)


def algebra(d_or_tag) -> DivisionAlgebra:
    for a in (R, C, H):
        if d_or_tag in (a.d, a.tag):
            return a
    raise ValueError(f"no real division algebra {d_or_tag!r}")


# -- entry arithmetic -------------------------------------------------------
def _mul(a: tuple, b: tuple) -> tuple:
    d = len(a)
    if d == 1:
        return (a[0] * b[0],)
    if d == 2:
        return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def quat_mul(a: Sequence, b: Sequence) -> tuple:
    """Hamilton product of component 4-tuples (works for any ring elements)."""
    return _mul(tuple(a), tuple(b))


def _conj(a: tuple) -> tuple:
    return (a[0],) + tuple(-x for x in a[1:])


def _add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


class AlgPolyMatrix:
    """A ``rows x cols`` matrix over F = R, C, H with SparsePoly components."""

    def __init__(self, d: int, entries: Sequence[Sequence[tuple]], nvars: int):
        self.d = d
        self.nvars = nvars
        self.entries = [[tuple(e) for e in row] for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        for row in self.entries:
            if len(row) != self.cols or any(len(e) != d for e in row):
                raise ValueError("ragged matrix or wrong component count")

    @classmethod
    def symbolic(cls, d: int, rows: int, cols: int) -> "AlgPolyMatrix":
        """Generic matrix whose components are the variables x_{ij}^{(a)}.

        Variable index is ``(i*cols + j)*d + a``.
        """
        n = rows * cols * d
        xs = SparsePoly.variables(n)
        entries = [[tuple(xs[(i * cols + j) * d + a] for a in range(d)) for j in range(cols)] for i in range(rows)]
        return cls(d, entries, n)

    @classmethod
    def from_numeric(cls, d: int, values, nvars: int = 0) -> "AlgPolyMatrix":
        """From nested sequences of component tuples (exact scalars)."""
        entries = []
        for row in values:
            er = []
            for e in row:
                comps = tuple(e) if isinstance(e, (tuple, list)) else (e,) + (0,) * (d - 1)
                er.append(tuple(SparsePoly.constant(c, nvars) for c in comps))
            entries.append(er)
        return cls(d, entries, nvars)

    @classmethod
    def identity(cls, d: int, r: int, nvars: int = 0) -> "AlgPolyMatrix":
        z = SparsePoly.zero(nvars)
        o = SparsePoly.one(nvars)
        return cls(d, [[(o if i == j else z,) + (z,) * (d - 1) for j in range(r)] for i in range(r)], nvars)

    def dagger(self) -> "AlgPolyMatrix":
        return AlgPolyMatrix(self.d, [[_conj(self.entries[i][j]) for i in range(self.rows)] for j in range(self.cols)], self.nvars)

    def __matmul__(self, other: "AlgPolyMatrix") -> "AlgPolyMatrix":
        if self.cols != other.rows or self.d != other.d:
            raise ValueError("shape or algebra mismatch")
        z = SparsePoly.zero(self.nvars)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = (z,) * self.d
                for k in range(self.cols):
                    acc = _add(acc, _mul(self.entries[i][k], other.entries[k][j]))
                row.append(acc)
            out.append(row)
        return AlgPolyMatrix(self.d, out, self.nvars)

    def __add__(self, other):
        return AlgPolyMatrix(self.d, [[_add(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)], self.nvars)

    def __sub__(self, other):
        return AlgPolyMatrix(self.d, [[_sub(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)], self.nvars)

    def __eq__(self, other):
        return isinstance(other, AlgPolyMatrix) and self.d == other.d and self.entries == other.entries

    def is_hermitian(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(self.entries[i][j] == _conj(self.entries[j][i]) for i in range(self.rows) for j in range(i, self.rows))

    def map(self, f) -> "AlgPolyMatrix":
        entries = [[tuple(f(c) for c in e) for e in row] for row in self.entries]
        nv = entries[0][0][0].nvars if entries and entries[0] else self.nvars
        return AlgPolyMatrix(self.d, entries, nv)

    def evaluate(self, point: Sequence) -> list[list[tuple]]:
        return [[tuple(c.evaluate(point) for c in e) for e in row] for row in self.entries]

    def __repr__(self):
        return f"AlgPolyMatrix(d={self.d}, {self.rows}x{self.cols}, nvars={self.nvars})"


def gram(w: AlgPolyMatrix) -> AlgPolyMatrix:
    """``Q(w) = w^dagger w``, a Hermitian ``r x r`` matrix."""
    return w.dagger() @ w


def _cycles(perm: Sequence[int]) -> list[list[int]]:
    """Cycle normal form: each cycle led by its minimal element, cycles by leader."""
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        j = perm[start]
        while j != start:
            cyc.append(j)
            seen[j] = True
            j = perm[j]
        out.append(cyc)
    return out


def moore_det(a: AlgPolyMatrix) -> tuple:
    """Moore permutation-cycle determinant; returns all ``d`` components."""
    r = a.rows
    z = SparsePoly.zero(a.nvars)
    one = (SparsePoly.one(a.nvars),) + (z,) * (a.d - 1)
    total = (z,) * a.d
    for perm in itertools.permutations(range(r)):
        cyc = _cycles(perm)
        sign = -1 if (r - len(cyc)) % 2 else 1
        term = one
        for c in cyc:
            for idx in range(len(c)):
                term = _mul(term, a.entries[c[idx]][c[(idx + 1) % len(c)]])
        total = _add(total, term) if sign > 0 else _sub(total, term)
    return total


def jordan_det(a: AlgPolyMatrix) -> SparsePoly:
    """Jordan norm of a Hermitian matrix (Moore determinant for F = H).

    Raises
    ------
    NonHermitianInput
        If ``a`` is not Hermitian.
    """
    if not a.is_hermitian():
        raise NonHermitianInput("jordan_det requires a Hermitian matrix")
    comps = moore_det(a)
    if any(c for c in comps[1:]):
        raise ArithmeticError("imaginary components of the Moore determinant did not cancel")
    return comps[0]


def complex_embedding(a: AlgPolyMatrix) -> list[list[tuple]]:
    """Entries as (re, im) pairs; quaternion entries become 2x2 complex blocks."""
    z = SparsePoly.zero(a.nvars)
    if a.d == 1:
        return [[(e[0], z) for e in row] for row in a.entries]
    if a.d == 2:
        return [[(e[0], e[1]) for e in row] for row in a.entries]
    out = [[None] * (2 * a.cols) for _ in range(2 * a.rows)]
    for i, row in enumerate(a.entries):
        for j, (p, q, u, v) in enumerate(row):
            out[2 * i][2 * j] = (p, q)
            out[2 * i][2 * j + 1] = (u, v)
            out[2 * i + 1][2 * j] = (-u, v)
            out[2 * i + 1][2 * j + 1] = (p, -q)
    return out


def _cdet(m: list[list[tuple]], nvars: int) -> tuple:
    n = len(m)
    z = SparsePoly.zero(nvars)
    total = (z, z)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = (SparsePoly.one(nvars), z)
        for i in range(n):
            term = _mul(term, m[i][perm[i]])
            if not term[0] and not term[1]:
                break
        total = _sub(total, term) if inv % 2 else _add(total, term)
    return total


def embedding_det(a: AlgPolyMatrix) -> SparsePoly:
    """Determinant of the complex embedding; must be real."""
    re, im = _cdet(complex_embedding(a), a.nvars)
    if im:
        raise ArithmeticError("complex embedding determinant is not real")
    return re


def jordan_det_via_embedding(a: AlgPolyMatrix) -> SparsePoly:
    """Secondary route for F = H: square root of the embedding determinant."""
    if not a.is_hermitian():
        raise NonHermitianInput("jordan_det requires a Hermitian matrix")
    if a.d != 4:
        return jordan_det(a)
    return poly_sqrt(embedding_det(a))


def psi(d: int, n: int, r: int) -> SparsePoly:
    """``Psi(w) = det(w^dagger w)`` in the ``d*n*r`` real coordinates of ``w``."""
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    return jordan_det(gram(AlgPolyMatrix.symbolic(d, n, r)))


# -- numeric (numpy) routines ----------------------------------------------
def components_to_complex(a: np.ndarray) -> np.ndarray:
    """``(rows, cols, d)`` real components -> complex matrix (2x size for H)."""
    a = np.asarray(a, dtype=float)
    d = a.shape[-1]
    if d == 1:
        return a[..., 0].astype(complex)
    if d == 2:
        return a[..., 0] + 1j * a[..., 1]
    p, q, u, v = (a[..., k] for k in range(4))
    rows, cols = a.shape[-3], a.shape[-2]
    out = np.empty(a.shape[:-3] + (2 * rows, 2 * cols), dtype=complex)
    out[..., 0::2, 0::2] = p + 1j * q
    out[..., 0::2, 1::2] = u + 1j * v
    out[..., 1::2, 0::2] = -u + 1j * v
    out[..., 1::2, 1::2] = p - 1j * q
    return out


def complex_to_components(m: np.ndarray, d: int) -> np.ndarray:
    """Inverse of :func:`components_to_complex`."""
    m = np.asarray(m)
    if d == 1:
        return m.real[..., None].copy()
    if d == 2:
        return np.stack([m.real, m.imag], axis=-1)
    a = m[..., 0::2, 0::2]
    b = m[..., 0::2, 1::2]
    return np.stack([a.real, a.imag, b.real, b.imag], axis=-1)


def nu(g: np.ndarray) -> float:
    """Character of GL_r(F) with ``det(g u g^dagger) = nu(g) det(u)``.

    ``g`` is given in component form ``(r, r, d)``.
    """
    g = np.asarray(g, dtype=float)
    d = g.shape[-1]
    m = components_to_complex(g)
    det = np.linalg.det(m)
    if d == 1:
        val = float(det.real) ** 2
    elif d == 2:
        val = float(abs(det)) ** 2
    else:
        val = float(det.real)
    if val == 0 or not np.isfinite(val):
        raise SingularMatrix("nu is undefined on singular matrices")
    return val


def dnu(x: np.ndarray) -> float:
    """Differential of ``nu`` at the identity: ``2 * sum Re(X_ii)``."""
    x = np.asarray(x, dtype=float)
    return float(2.0 * np.trace(x[..., 0]))


def nu_exact(g: AlgPolyMatrix):
    """Exact ``nu`` for a numeric (zero-variable) matrix over F."""
    if g.nvars != 0:
        raise ValueError("nu_exact needs a numeric matrix")
    if g.d == 4:
        val = embedding_det(g).constant_term()
    else:
        re, im = _cdet(complex_embedding(g), 0)
        re, im = re.constant_term(), im.constant_term()
        val = re * re + im * im
    if val == 0:
        raise SingularMatrix("nu is undefined on singular matrices")
    return val
