"""Structure constants of Gr_{n,r}(F) and the K-type decomposition of P^m.

``P^m`` is built as the joint eigenspace of the right ``gl_r(F)`` action among
homogeneous polynomials of the right column degrees.  It is decomposed with
the operator matrix of ``C_{s,1}`` at a generic rational ``s*``, and each
eigenspace is checked against the Weyl dimension of its K-type.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Sequence

import numpy as np

from .diffop import OperatorMatrix, operator_matrix
from .exactcore import ParamPoly, SparsePoly, exact_nullspace
from .exactcore.matrix import exact_matmul, kernel, rank, to_object
from .exactcore.poly import pack
from .exactcore.scalars import simplify_scalar
from .frames import CoordinateFrame, apply_field

log = logging.getLogger(__name__)

__all__ = [
    "GrassmannStructure",
    "EvenPartition",
    "EquivariantSpace",
    "SpectralBlock",
    "SpectralDecomposition",
    "EmptySpace",
    "SpectralCollision",
    "DimensionMismatch",
    "NonUniqueSphericalVector",
    "RankViolation",
    "LargeCaseDisabled",
    "structure",
    "enumerate_lambda_m",
    "build_equivariant_space",
    "weyl_dim",
    "decompose",
    "spherical_polynomial",
    "predicted_eigenvalue",
    "verify_eigenbasis",
    "annihilation_residual",
    "generic_rationals",
    "highest_weight",
]


class EmptySpace(ValueError):
    pass


class SpectralCollision(ArithmeticError):
    pass


class DimensionMismatch(AssertionError):
    pass


class NonUniqueSphericalVector(AssertionError):
    pass


class RankViolation(ValueError):
    pass


class LargeCaseDisabled(RuntimeError):
    """Raised for F = H spaces with r >= 2 unless the large-case flag is set."""


# -- structure constants ----------------------------------------------------
@dataclass(frozen=True)
class GrassmannStructure:
    d: int
    n: int
    r: int

    def __post_init__(self):
        if self.d not in (1, 2, 4):
            raise ValueError(f"d must be 1, 2 or 4, got {self.d}")
        if not 1 <= self.r <= self.n - self.r:
            raise RankViolation(f"need 1 <= r <= n - r, got n={self.n}, r={self.r}")

    @property
    def rho(self) -> tuple[Fraction, ...]:
        d, n = self.d, self.n
        return tuple(Fraction(d * n, 2) - d * (j - 1) - 1 for j in range(1, self.r + 1))

    @property
    def multiplicities(self) -> dict[str, int]:
        d, n, r = self.d, self.n, self.r
        return {"e_i": d * (n - 2 * r), "2e_i": d - 1, "e_i+-e_j": d}

    def radon_parameters(self, rprime: int) -> tuple[Fraction, Fraction, Fraction]:
        """``(alpha, beta, l)`` for the pair (r, r')."""
        d = self.d
        return Fraction(d * self.r, 2), Fraction(d * (self.n - rprime), 2), Fraction(d * (rprime - self.r), 2)


def structure(d: int, n: int, r: int) -> GrassmannStructure:
    return GrassmannStructure(d, n, r)


@dataclass(frozen=True, order=True)
class EvenPartition:
    """Non-increasing tuple of nonnegative integers, all even after removing a twist ``b``."""

    parts: tuple[int, ...]
    twist: int = 0

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(int(x) for x in self.parts))
        p, b = self.parts, self.twist
        if any(x < y for x, y in zip(p, p[1:])) or (p and p[-1] < b):
            raise ValueError(f"{p} is not a partition with parts >= {b}")
        if any((x - b) % 2 for x in p):
            raise ValueError(f"{p} minus the twist {b} is not even")

    @property
    def m(self) -> tuple[int, ...]:
        return tuple((x - self.twist) // 2 for x in self.parts)

    @property
    def size(self) -> int:
        return sum(self.m)

    @property
    def r(self) -> int:
        return len(self.parts)

    def shifted(self, rho: Sequence) -> tuple:
        """``mu + rho`` (the spectral parameter)."""
        return tuple(x + y for x, y in zip(self.parts, rho))

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __str__(self):
        return "(" + ",".join(str(x) for x in self.parts) + ")"


def enumerate_lambda_m(r: int, m: int, twist: int = 0) -> list[EvenPartition]:
    """``{mu : mu_1 <= 2m}`` (shifted by ``twist`` in every entry), graded-lex ordered."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    out = []
    for ks in itertools.combinations_with_replacement(range(m, -1, -1), r):
        out.append(EvenPartition(tuple(2 * k + twist for k in ks), twist))
    out.sort(key=lambda mu: (sum(mu.parts), mu.parts))
    return out


# -- Weyl dimensions --------------------------------------------------------
def _dim_gl(lam: Sequence[int]) -> int:
    n = len(lam)
    num = prod(lam[i] - lam[j] + j - i for i in range(n) for j in range(i + 1, n))
    den = prod(j - i for i in range(n) for j in range(i + 1, n))
    return num // den


def _dim_b(lam: Sequence[int]) -> int:
    k = len(lam)
    delta = [Fraction(2 * (k - i) - 1, 2) for i in range(k)]
    l = [x + y for x, y in zip(lam, delta)]
    num = prod((l[i] ** 2 - l[j] ** 2) for i in range(k) for j in range(i + 1, k)) * prod(l)
    den = prod((delta[i] ** 2 - delta[j] ** 2) for i in range(k) for j in range(i + 1, k)) * prod(delta)
    return int(Fraction(num) / Fraction(den))


def _dim_c(lam: Sequence[int]) -> int:
    k = len(lam)
    delta = [k - i for i in range(k)]
    l = [x + y for x, y in zip(lam, delta)]
    num = prod((l[i] ** 2 - l[j] ** 2) for i in range(k) for j in range(i + 1, k)) * prod(l)
    den = prod((delta[i] ** 2 - delta[j] ** 2) for i in range(k) for j in range(i + 1, k)) * prod(delta)
    return num // den


def _dim_d(lam: Sequence[int]) -> int:
    k = len(lam)
    delta = [k - 1 - i for i in range(k)]
    l = [x + y for x, y in zip(lam, delta)]
    num = prod((l[i] ** 2 - l[j] ** 2) for i in range(k) for j in range(i + 1, k))
    den = prod((delta[i] ** 2 - delta[j] ** 2) for i in range(k) for j in range(i + 1, k))
    return num // den


def highest_weight(d: int, n: int, mu: Sequence[int], p: int = 0) -> tuple:
    """Highest weight of ``V_mu`` for K = O(n), U(n), Sp(n) (see module notes)."""
    mu = tuple(mu)
    r = len(mu)
    if d == 1:
        k = n // 2
        return tuple(mu) + (0,) * (k - r)
    if d == 2:
        b = abs(p)
        ks = [(x - b) // 2 for x in mu]
        lam = [k + b for k in ks] + [0] * (n - 2 * r) + [-k for k in reversed(ks)]
        if p < 0:
            lam = [-x for x in reversed(lam)]
        return tuple(lam)
    lam = []
    for x in mu:
        lam += [x // 2, x // 2]
    return tuple(lam) + (0,) * (n - len(lam))


def weyl_dim(d: int, n: int, mu: Sequence[int], p: int = 0) -> int:
    """Dimension of the K-type ``V_mu`` (``p``: line-bundle twist for F = C)."""
    mu = tuple(mu)
    lam = highest_weight(d, n, mu, p)
    if d == 2:
        return _dim_gl(lam)
    if d == 4:
        return _dim_c(lam)
    if n % 2:
        return _dim_b(lam)
    base = _dim_d(lam)
    # O(n) vs SO(n): the type with nonzero last entry at rank n/2 is induced
    if len(mu) == n // 2 and mu[-1] > 0:
        return 2 * base
    if n == 2 and mu and mu[0] > 0:
        return 2 * base
    return base


# -- equivariant spaces -----------------------------------------------------
def _column_monomials(frame: CoordinateFrame, targets: tuple) -> list[tuple]:
    """Exponent vectors with the given per-column degrees."""
    groups: dict[int, list[int]] = {}
    for v in range(frame.nvars):
        c = frame.column_of(v) + (frame.r if frame.is_conjugate_variable(v) else 0)
        groups.setdefault(c, []).append(v)
    per_group = []
    for c in range(len(targets)):
        vars_c = groups.get(c, [])
        opts = []
        for combo in itertools.combinations_with_replacement(vars_c, targets[c]):
            opts.append(combo)
        per_group.append(opts)
    out = []
    for choice in itertools.product(*per_group):
        e = [0] * frame.nvars
        for combo in choice:
            for v in combo:
                e[v] += 1
        out.append(tuple(e))
    return out


@dataclass
class EquivariantSpace:
    """Exact basis of ``P^m`` (or its twisted analogue for ``p != 0``).

    ``psi_exponent`` is the power ``m'`` with the functions being
    ``Psi^(-m') * basis``: ``m`` for ``p >= 0`` and ``m + |p|`` for ``p < 0``.
    """

    frame: CoordinateFrame
    m: int
    p: int
    basis: list[SparsePoly]
    monomials: int

    @property
    def d(self):
        return self.frame.d

    @property
    def n(self):
        return self.frame.n

    @property
    def r(self):
        return self.frame.r

    @property
    def psi_exponent(self) -> int:
        return self.m + max(-self.p, 0)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def degree(self) -> int:
        return self.r * (2 * self.m + abs(self.p))

    @property
    def types(self) -> list[EvenPartition]:
        return enumerate_lambda_m(self.r, self.m, abs(self.p))

    def expected_dim(self) -> int:
        return sum(weyl_dim(self.d, self.n, mu.parts, self.p) for mu in self.types)

    def combine(self, coords: dict | Sequence) -> SparsePoly:
        items = coords.items() if isinstance(coords, dict) else enumerate(coords)
        out = SparsePoly.zero(self.frame.nvars)
        for i, c in items:
            if c:
                out = out + self.basis[i] * c
        return out


def _linear_constraints(frame, monos: list[tuple], fields) -> list[dict]:
    """Rows of ``(field - eig)`` restricted to a monomial set (keys = column index)."""
    rows: dict[int, dict] = {}
    for fld, eig in fields:
        for i, e in enumerate(monos):
            x = SparsePoly.monomial(e)
            img = apply_field(fld, x)
            if eig:
                img = img - x * eig
            for k, c in img.packed.items():
                row = rows.setdefault((id(fld), k), {})
                row[i] = row.get(i, 0) + c
    return [r for r in rows.values() if any(r.values())]


def build_equivariant_space(d: int, n: int, r: int, m: int, p: int = 0, frame: CoordinateFrame | None = None, large: bool = False) -> EquivariantSpace:
    """Exact basis of the polynomials ``f`` with ``f(wg) = nu-character(g) f(w)``.

    The infinitesimal right action of every basis element of ``gl_r(F)`` must
    act by the character's differential; for F = R the reflection
    ``diag(-1, 1, ..., 1)`` must fix ``f``.
    """
    if p and d != 2:
        raise ValueError("line-bundle twist needs F = C")
    if d == 4 and r >= 2 and not large:
        raise LargeCaseDisabled("quaternionic spaces with r >= 2 need the large-case flag")
    GrassmannStructure(d, n, r)
    if m < 0:
        raise EmptySpace("m must be nonnegative")
    if frame is None:
        frame = CoordinateFrame(d, n, r)
    targets = frame.column_targets(m, p)
    monos = _column_monomials(frame, targets)
    for signs in frame.right_reflections():
        monos = [e for e in monos if prod(s ** k for s, k in zip(signs, e)) == 1]
    # grlex-descending column order keeps the basis canonical
    N = frame.nvars
    monos.sort(key=lambda e: pack(e, N), reverse=True)
    fields = []
    for fld, eig in frame.right_fields(m, p):
        fields.append((fld, eig))
    rows = _linear_constraints(frame, monos, fields)
    null = exact_nullspace(rows, list(range(len(monos))))
    if not null:
        raise EmptySpace(f"no equivariant polynomials for d={d}, n={n}, r={r}, m={m}, p={p}")
    basis = [SparsePoly(N, {monos[i]: c for i, c in vec.items()}) for vec in null]
    return EquivariantSpace(frame, m, p, basis, len(monos))


# -- decomposition ----------------------------------------------------------
def _q_factor(t, z, l: int) -> ParamPoly | Fraction:
    out = 1
    for i in range(l):
        for zj in z:
            out = out * ((t + 2 * i) * (t + 2 * i) - zj * zj)
    return out


def predicted_eigenvalue(d: int, n: int, r: int, mu: Sequence[int], l: int = 1, p: int = 0) -> ParamPoly:
    """``q_l(2s - rho_1 - p, mu + rho)`` as a polynomial in ``s``."""
    rho = GrassmannStructure(d, n, r).rho
    z = [Fraction(x) + y for x, y in zip(mu, rho)]
    t = ParamPoly.from_scalars([-rho[0] - p, 2])
    out = _q_factor(t, z, l)
    if not isinstance(out, ParamPoly):
        out = ParamPoly.from_scalars([out])
    return out


@dataclass
class SpectralBlock:
    mu: EvenPartition
    eigenvalue: ParamPoly
    vectors: list[dict]  # coordinates over the space basis
    weyl_dim: int

    @property
    def dim(self) -> int:
        return len(self.vectors)


@dataclass
class SpectralDecomposition:
    space: EquivariantSpace
    s_star: Fraction
    blocks: list[SpectralBlock]
    matrix: OperatorMatrix
    log: list[str] = field(default_factory=list)

    def block(self, mu) -> SpectralBlock:
        key = tuple(mu)
        for b in self.blocks:
            if b.mu.parts == key:
                return b
        raise KeyError(f"no block for mu={key}")

    def basis_matrix(self) -> np.ndarray:
        """Columns: all eigenvectors, block by block."""
        cols = [v for b in self.blocks for v in b.vectors]
        dim = self.space.dim
        return to_object([[v.get(i, 0) for v in cols] for i in range(dim)])


def generic_rationals(seed: int):
    """Reproducible stream of small-height rationals."""
    rng = random.Random(seed)
    while True:
        num = rng.randint(-60, 60)
        den = rng.randint(1, 11)
        yield Fraction(num, den)


def decompose(space: EquivariantSpace, matrix: OperatorMatrix | None = None, seed: int = 20240601, max_tries: int = 20, method: str = "auto") -> SpectralDecomposition:
    """Split ``space`` into eigenspaces of ``C_{s*,l}`` labelled by K-types.

    Each eigenspace is the kernel of ``B(s*) - c_mu(s*)``; the labels come
    from the predicted eigenvalues, which must be distinct at ``s*``.
    """
    if matrix is None:
        matrix = operator_matrix(space, 1, method=method)
    types = space.types
    preds = {mu: predicted_eigenvalue(space.d, space.n, space.r, mu.parts, matrix.l, space.p) for mu in types}
    notes = []
    s_star = None
    for tries, s in enumerate(generic_rationals(seed)):
        if tries >= max_tries:
            raise SpectralCollision(f"predicted eigenvalues collide at {max_tries} trial values of s")
        vals = [preds[mu].eval_scalar(s) for mu in types]
        if len(set(vals)) == len(vals):
            s_star = s
            break
        notes.append(f"collision at s*={s}")
    notes.append(f"s*={s_star} (seed {seed})")
    log.info("decompose d=%s n=%s r=%s m=%s p=%s: s*=%s", space.d, space.n, space.r, space.m, space.p, s_star)
    B = to_object(matrix.at(s_star))
    dim = space.dim
    blocks = []
    total = 0
    for mu in types:
        c = preds[mu].eval_scalar(s_star)
        shifted = B.copy()
        for i in range(dim):
            shifted[i, i] = shifted[i, i] - c
        vecs = kernel(shifted)
        wd = weyl_dim(space.d, space.n, mu.parts, space.p)
        if len(vecs) != wd:
            raise DimensionMismatch(f"mu={mu}: eigenspace dimension {len(vecs)} != Weyl dimension {wd}")
        total += len(vecs)
        blocks.append(SpectralBlock(mu, preds[mu], vecs, wd))
    if total != dim:
        raise DimensionMismatch(f"eigenspaces span {total} of {dim} dimensions")
    return SpectralDecomposition(space, s_star, blocks, matrix, notes)


def verify_eigenbasis(dec: SpectralDecomposition, matrix: OperatorMatrix, l: int | None = None) -> list[str]:
    """Check ``B(s) v = q_l(2s - rho_1 - p, mu + rho) v`` for every eigenvector, identically in s.

    Together with the eigenvectors spanning the space this proves
    ``prod_mu (B(s) - q_l(mu) I) = 0``.  Returns a list of failure messages.
    """
    space = dec.space
    l = matrix.l if l is None else l
    deg = max(matrix.s_degree(), 0)
    coeffs = [to_object(matrix.coefficient_matrix(k)) for k in range(deg + 1)]
    failures = []
    V = dec.basis_matrix()
    if rank(V) != space.dim:
        failures.append("eigenvectors do not span the space")
    col = 0
    for blk in dec.blocks:
        pred = predicted_eigenvalue(space.d, space.n, space.r, blk.mu.parts, l, space.p)
        pc = pred.scalar_coeffs()
        k = blk.dim
        Vb = V[:, col:col + k]
        col += k
        for power in range(max(deg, pred.degree) + 1):
            lhs = exact_matmul(coeffs[power], Vb) if power <= deg else np.zeros(Vb.shape, dtype=object)
            c = pc[power] if power < len(pc) else 0
            if not all(x == c * y for x, y in zip(lhs.flat, Vb.flat)):
                failures.append(f"mu={blk.mu}: s^{power} coefficient of B(s) v differs from the predicted eigenvalue")
                break
    return failures


def annihilation_residual(matrix: OperatorMatrix, eigenvalues: Sequence[ParamPoly]) -> bool:
    """Directly test ``prod (B(s) - c_i(s) I) = 0`` by exact evaluation at
    ``deg + 1`` values of s (deg bounds the s-degree of the product)."""
    dim = matrix.size
    deg = len(eigenvalues) * max(matrix.s_degree(), max(e.degree for e in eigenvalues))
    for s in range(deg + 1):
        B = to_object(matrix.at(s))
        acc = None
        for c in eigenvalues:
            shifted = B.copy()
            cv = c.eval_scalar(s)
            for i in range(dim):
                shifted[i, i] = shifted[i, i] - cv
            acc = shifted if acc is None else exact_matmul(acc, shifted)
        if any(v != 0 for v in acc.flat):
            return False
    return True


# -- spherical vectors ------------------------------------------------------
def spherical_polynomial(dec: SpectralDecomposition, mu) -> SparsePoly:
    """Numerator ``g`` of the M-invariant ``phi_mu = Psi^(-m) g`` with ``phi_mu(x0) = 1``."""
    space = dec.space
    if space.p:
        raise ValueError("spherical vectors are built for p = 0 only")
    blk = dec.block(mu)
    frame = space.frame
    polys = [space.combine(v) for v in blk.vectors]
    N = frame.nvars
    rows: dict = {}
    for fi, fld in enumerate(frame.left_fields()):
        for i, g in enumerate(polys):
            for k, c in apply_field(fld, g).packed.items():
                rows.setdefault((fi, k), {})[i] = c
    for si, signs in enumerate(frame.left_reflections()):
        for i, g in enumerate(polys):
            diff = g.scale_variables(signs) - g
            for k, c in diff.packed.items():
                rows.setdefault(("refl", si, k), {})[i] = c
    null = exact_nullspace(list(rows.values()), list(range(len(polys))))
    if len(null) != 1:
        raise NonUniqueSphericalVector(f"mu={blk.mu}: invariant subspace has dimension {len(null)}")
    g = SparsePoly.zero(N)
    for i, c in null[0].items():
        g = g + polys[i] * c
    val = simplify_scalar(g.evaluate(frame.x0()))
    if not val:
        raise NonUniqueSphericalVector(f"mu={blk.mu}: invariant vector vanishes at the base point")
    return g / val
