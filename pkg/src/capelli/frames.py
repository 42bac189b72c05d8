"""Coordinate frames on W = Mat_{n x r}(F).

A frame fixes the polynomial variables used for everything downstream: the
polynomial Psi, the symbol of ``L = d(Psi)``, the vector fields of the right
``GL_r(F)`` action and of the left action of ``K_r x K_{n-r}``, and the
coordinates of distinguished points.

``real`` frames use the ``d*n*r`` real components ``x_{ij}^{(a)}``, declared
orthonormal up to the scale ``kappa``.  ``wirtinger`` frames (F = C only) use
``z_{ij}`` and ``zb_{ij}`` as independent variables; there
``d(z) = 2 d/dzb`` and ``d(zb) = 2 d/dz`` for ``kappa = 1``.  The Wirtinger
frame keeps every constraint and every basis polynomial rational.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exactcore import SparsePoly
from .exactcore.scalars import GaussRational, simplify_scalar
from .jordan import _mul, psi as _real_psi

__all__ = ["CoordinateFrame", "VectorField", "apply_field"]

_UNIT_NAMES = ("r", "i", "j", "k")

# A first-order operator sum_b lin_b * d/dx_b, stored as ((b, lin_b), ...).
VectorField = tuple


def apply_field(field: VectorField, f: SparsePoly) -> SparsePoly:
    out = SparsePoly.zero(f.nvars)
    for b, lin in field:
        db = f.diff(b)
        if db:
            out = out + lin * db
    return out


def _unit(a: int, d: int) -> tuple:
    return tuple(1 if i == a else 0 for i in range(d))


def _right_matrix(u: tuple, d: int) -> list[list]:
    """``R[a][b]`` with ``(w u)^(a) = sum_b R[a][b] w^(b)``."""
    cols = [_mul(_unit(b, d), u) for b in range(d)]
    return [[cols[b][a] for b in range(d)] for a in range(d)]


def _left_matrix(u: tuple, d: int) -> list[list]:
    """``L[a][b]`` with ``(u w)^(a) = sum_b L[a][b] w^(b)``."""
    cols = [_mul(u, _unit(b, d)) for b in range(d)]
    return [[cols[b][a] for b in range(d)] for a in range(d)]


class CoordinateFrame:
    """Polynomial coordinates on ``Mat_{n x r}(F)``.

    Parameters
    ----------
    d, n, r:
        Real dimension of F, and the matrix shape.
    kind:
        ``"real"`` or ``"wirtinger"`` (F = C only).  Defaults to Wirtinger for
        d = 2 and real otherwise.
    kappa:
        Scale of the inner product ``<w, w> = kappa * sum x^2``.
    """

    def __init__(self, d: int, n: int, r: int, kind: str | None = None, kappa=1):
        if d not in (1, 2, 4):
            raise ValueError(f"d must be 1, 2 or 4, got {d}")
        if not 1 <= r <= n:
            raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
        if kind is None:
            kind = "wirtinger" if d == 2 else "real"
        if kind not in ("real", "wirtinger"):
            raise ValueError(f"unknown frame kind {kind!r}")
        if kind == "wirtinger" and d != 2:
            raise ValueError("Wirtinger coordinates need F = C")
        kappa = Fraction(kappa)
        if kappa <= 0:
            raise ValueError("kappa must be positive")
        self.d, self.n, self.r, self.kind, self.kappa = d, n, r, kind, kappa
        self.nvars = d * n * r

    def __repr__(self):
        return f"CoordinateFrame(d={self.d}, n={self.n}, r={self.r}, kind={self.kind!r}, kappa={self.kappa})"

    def __eq__(self, other):
        return isinstance(other, CoordinateFrame) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def key(self):
        return (self.d, self.n, self.r, self.kind, self.kappa)

    # -- variables ----------------------------------------------------------
    def index(self, i: int, j: int, a: int = 0) -> int:
        """Variable index of entry (i, j): component ``a`` (real frame) or
        ``a = 0`` for ``z_ij`` and ``a = 1`` for ``zb_ij`` (Wirtinger)."""
        if self.kind == "real":
            return (i * self.r + j) * self.d + a
        return a * self.n * self.r + i * self.r + j

    @cached_property
    def names(self) -> list[str]:
        out = [""] * self.nvars
        for i in range(self.n):
            for j in range(self.r):
                if self.kind == "wirtinger":
                    out[self.index(i, j, 0)] = f"z{i + 1}{j + 1}"
                    out[self.index(i, j, 1)] = f"zb{i + 1}{j + 1}"
                else:
                    for a in range(self.d):
                        suffix = _UNIT_NAMES[a] if self.d > 1 else ""
                        out[self.index(i, j, a)] = f"x{i + 1}{j + 1}{suffix}"
        return out

    def column_of(self, v: int) -> int:
        if self.kind == "real":
            return (v // self.d) % self.r
        return v % self.r

    def row_of(self, v: int) -> int:
        if self.kind == "real":
            return v // (self.d * self.r)
        return (v % (self.n * self.r)) // self.r

    def is_conjugate_variable(self, v: int) -> bool:
        return self.kind == "wirtinger" and v >= self.n * self.r

    # -- Psi and L ----------------------------------------------------------
    @cached_property
    def psi(self) -> SparsePoly:
        if self.kind == "real":
            return _real_psi(self.d, self.n, self.r)
        n, r, N = self.n, self.r, self.nvars
        z = [[SparsePoly.variable(self.index(i, j, 0), N) for j in range(r)] for i in range(n)]
        zb = [[SparsePoly.variable(self.index(i, j, 1), N) for j in range(r)] for i in range(n)]
        # Cauchy-Binet: det(z^dagger z) = sum over row sets of |minor|^2
        total = SparsePoly.zero(N)
        for rows in itertools.combinations(range(n), r):
            minor = SparsePoly.zero(N)
            minor_b = SparsePoly.zero(N)
            for perm in itertools.permutations(range(r)):
                inv = sum(1 for a in range(r) for b in range(a + 1, r) if perm[a] > perm[b])
                t = SparsePoly.one(N)
                tb = SparsePoly.one(N)
                for a in range(r):
                    t = t * z[rows[a]][perm[a]]
                    tb = tb * zb[rows[a]][perm[a]]
                minor = minor - t if inv % 2 else minor + t
                minor_b = minor_b - tb if inv % 2 else minor_b + tb
            total = total + minor * minor_b
        return total

    @cached_property
    def psi_partials(self) -> list[SparsePoly]:
        return [self.psi.diff(v) for v in range(self.nvars)]

    def dual_symbol(self, p: SparsePoly) -> SparsePoly:
        """Symbol of the constant-coefficient operator ``d(p)``.

        The result is read with variable ``v`` meaning ``d/dx_v``.
        """
        if p.nvars != self.nvars:
            raise ValueError("polynomial is not in this frame's variables")
        if self.kind == "real":
            out = p.scale_variables([1 / self.kappa] * self.nvars)
        else:
            half = self.n * self.r
            swap = [(v + half) % self.nvars for v in range(self.nvars)]
            out = p.embed(self.nvars, swap).scale_variables([2 / self.kappa] * self.nvars)
        return out.map_coefficients(simplify_scalar)

    @cached_property
    def laplace_symbol(self) -> SparsePoly:
        """Symbol of ``L = d(Psi)``."""
        return self.dual_symbol(self.psi)

    # -- points -------------------------------------------------------------
    def point(self, components) -> list:
        """Frame coordinates of a matrix given as ``components[i][j]`` = d-tuple.

        Exact inputs give exact coordinates (GaussRational for Wirtinger);
        floats give floats/complex numbers.
        """
        out = [0] * self.nvars
        for i in range(self.n):
            for j in range(self.r):
                e = components[i][j]
                e = tuple(e) if isinstance(e, (tuple, list)) else (e,)
                e = e + (0,) * (self.d - len(e))
                if self.kind == "real":
                    for a in range(self.d):
                        out[self.index(i, j, a)] = e[a]
                else:
                    re, im = e[0], e[1]
                    if isinstance(re, float) or isinstance(im, float):
                        out[self.index(i, j, 0)] = complex(re, im)
                        out[self.index(i, j, 1)] = complex(re, -im)
                    else:
                        out[self.index(i, j, 0)] = GaussRational(re, im)
                        out[self.index(i, j, 1)] = GaussRational(re, -im)
        return out

    def x0(self) -> list:
        """Coordinates of ``x0 = [I_r; 0]``."""
        return self.point([[1 if i == j else 0 for j in range(self.r)] for i in range(self.n)])

    def y1(self) -> list:
        """Coordinates of the frame ``[e_{r+1}, ..., e_{2r}]``."""
        if 2 * self.r > self.n:
            raise ValueError("y1 needs 2r <= n")
        return self.point([[1 if i == j + self.r else 0 for j in range(self.r)] for i in range(self.n)])

    # -- vector fields ------------------------------------------------------
    def _field(self, entries) -> VectorField:
        """From (coef, a, b) triples meaning coef * x_a * d/dx_b."""
        by_b: dict[int, SparsePoly] = {}
        for c, a, b in entries:
            if c:
                lin = SparsePoly.monomial([int(v == a) for v in range(self.nvars)], c)
                by_b[b] = by_b[b] + lin if b in by_b else lin
        return tuple((b, lin) for b, lin in sorted(by_b.items()) if lin)

    def right_fields(self, m, p: int = 0) -> list[tuple[VectorField, object]]:
        """Right ``gl_r(F)`` action fields with their eigenvalues on the space
        ``f(wg) = det(g)^(m+p+) conj(det g)^(m+p-) f(w)`` (``p = 0`` unless F = C).
        """
        if p and self.d != 2:
            raise ValueError("line-bundle twist needs F = C")
        n, r, d = self.n, self.r, self.d
        pp, pm = max(p, 0), max(-p, 0)
        out = []
        if self.kind == "wirtinger":
            for k in range(r):
                for j in range(r):
                    hol = self._field((1, self.index(i, k, 0), self.index(i, j, 0)) for i in range(n))
                    anti = self._field((1, self.index(i, k, 1), self.index(i, j, 1)) for i in range(n))
                    out.append((hol, (m + pp) if k == j else 0))
                    out.append((anti, (m + pm) if k == j else 0))
            return out
        mprime = m + pm
        for k in range(r):
            for j in range(r):
                for ua in range(d):
                    u = _unit(ua, d)
                    R = _right_matrix(u, d)
                    ents = []
                    for i in range(n):
                        for a in range(d):
                            for b in range(d):
                                ents.append((R[a][b], self.index(i, k, b), self.index(i, j, a)))
                    eig = 0
                    if k == j:
                        if ua == 0:
                            eig = 2 * mprime + p
                        elif ua == 1 and p:
                            eig = GaussRational(0, p)
                    out.append((self._field(ents), eig))
        return out

    def right_reflections(self) -> list[list[int]]:
        """Sign patterns (per variable) of the right reflections imposed on P^m."""
        if self.d != 1:
            return []
        return [[-1 if self.column_of(v) == 0 else 1 for v in range(self.nvars)]]

    def blocks(self) -> list[range]:
        return [blk for blk in (range(self.r), range(self.r, self.n)) if len(blk)]

    def left_fields(self) -> list[VectorField]:
        """Left action of ``Lie(K_r) + Lie(K_{n-r})`` (complexified for Wirtinger)."""
        d = self.d
        out = []
        for blk in self.blocks():
            if self.kind == "wirtinger":
                for a in blk:
                    for b in blk:
                        ents = []
                        for j in range(self.r):
                            ents.append((1, self.index(b, j, 0), self.index(a, j, 0)))
                            ents.append((-1, self.index(a, j, 1), self.index(b, j, 1)))
                        out.append(self._field(ents))
                continue
            for a in blk:
                for b in blk:
                    if b < a:
                        continue
                    for ua in range(d):
                        if a == b and ua == 0:
                            continue
                        u = _unit(ua, d)
                        ubar = (u[0],) + tuple(-x for x in u[1:])
                        Lu = _left_matrix(u, d)
                        Lub = _left_matrix(tuple(-x for x in ubar), d)
                        ents = []
                        for j in range(self.r):
                            for c in range(d):
                                for e in range(d):
                                    # (Yw)_{aj} += u w_{bj};  (Yw)_{bj} += -ubar w_{aj}
                                    ents.append((Lu[c][e], self.index(b, j, e), self.index(a, j, c)))
                                    if a != b:
                                        ents.append((Lub[c][e], self.index(a, j, e), self.index(b, j, c)))
                        out.append(self._field(ents))
        return out

    def left_reflections(self) -> list[list[int]]:
        """Sign patterns of block reflections (F = R): negate the first row of each block."""
        if self.d != 1:
            return []
        return [[-1 if self.row_of(v) == blk[0] else 1 for v in range(self.nvars)] for blk in self.blocks()]

    def column_degrees(self, exps: Sequence[int]) -> tuple:
        """Per-column degrees (pairs of holomorphic/antiholomorphic for Wirtinger)."""
        if self.kind == "real":
            out = [0] * self.r
            for v, e in enumerate(exps):
                if e:
                    out[self.column_of(v)] += e
            return tuple(out)
        out = [0] * (2 * self.r)
        for v, e in enumerate(exps):
            if e:
                out[self.column_of(v) + (self.r if self.is_conjugate_variable(v) else 0)] += e
        return tuple(out)

    def column_targets(self, m, p: int = 0) -> tuple:
        """Column degrees of monomials in the (twisted) equivariant space."""
        pp, pm = max(p, 0), max(-p, 0)
        if self.kind == "real":
            return tuple([2 * m + abs(p)] * self.r)
        return tuple([m + pp] * self.r + [m + pm] * self.r)
