"""The Psi-power calculus and exact matrices of ``C_{s,l} = Psi^(s+l) L^l Psi^(-s)``.

Every intermediate function has the normal form ``Psi^(-s-k) * P(s; x)`` with
``P`` a :class:`ParamPoly`.  A first-order derivative raises ``k`` by one:

    d_v (Psi^(-s-k) P) = Psi^(-s-k-1) ((-s-k) (d_v Psi) P + Psi d_v P)

No common powers of Psi are cancelled inside the calculus; divisibility is
checked once, when reading off operator matrices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactcore import ImageNotInSpan, LinearCoordinates, ParamPoly, SparsePoly
from .exactcore.linalg import inverse
from .exactcore import kernels as K
from .exactcore.poly import guard_for, pack
from .exactcore.scalars import simplify_scalar
from .frames import CoordinateFrame

__all__ = [
    "CoordinateFrame",
    "PsiPowerElement",
    "CapelliResult",
    "OperatorMatrix",
    "ImageNotInSpan",
    "apply_partial",
    "apply_dop",
    "capelli_apply",
    "operator_matrix",
    "matmul",
    "param_identity",
]


@dataclass(frozen=True)
class PsiPowerElement:
    """The function ``Psi^(-s-offset) * payload(s; x)``."""

    frame: CoordinateFrame
    offset: int
    payload: ParamPoly

    @classmethod
    def power(cls, frame: CoordinateFrame, f: SparsePoly | None = None) -> "PsiPowerElement":
        """``Psi^(-s) * f`` (``f = 1`` by default)."""
        if f is None:
            f = SparsePoly.one(frame.nvars)
        return cls(frame, 0, ParamPoly.from_poly(f))

    def raise_offset(self, k: int) -> "PsiPowerElement":
        """Same function with the offset increased by ``k`` (payload times Psi^k)."""
        if k == 0:
            return self
        mult = self.frame.psi ** k
        return PsiPowerElement(self.frame, self.offset + k, self.payload.map_coefficients(lambda c: c * mult))

    def __add__(self, other: "PsiPowerElement") -> "PsiPowerElement":
        k = max(self.offset, other.offset)
        a, b = self.raise_offset(k - self.offset), other.raise_offset(k - other.offset)
        return PsiPowerElement(self.frame, k, a.payload + b.payload)

    def scale(self, c) -> "PsiPowerElement":
        return PsiPowerElement(self.frame, self.offset, self.payload * c)


def apply_partial(e: PsiPowerElement, v: int) -> PsiPowerElement:
    """Partial derivative in frame variable ``v``."""
    frame = e.frame
    if not 0 <= v < frame.nvars:
        raise IndexError(f"variable {v} not in frame")
    psi = frame.psi
    dpsi = frame.psi_partials[v]
    k = e.offset
    coeffs = e.payload.coeffs
    zero = SparsePoly.zero(frame.nvars)
    out = [zero] * (len(coeffs) + 1)
    for j, pj in enumerate(coeffs):
        if not pj:
            continue
        q = dpsi * pj
        out[j] = out[j] + psi * pj.diff(v) - q * k
        out[j + 1] = out[j + 1] - q
    return PsiPowerElement(frame, k + 1, ParamPoly(out, frame.nvars))


def _apply_symbol(symbol: SparsePoly, e: PsiPowerElement) -> PsiPowerElement:
    """Apply ``sum_alpha c_alpha d^alpha`` (symbol read with x_v = d/dx_v)."""
    memo: dict[tuple, PsiPowerElement] = {}
    zero_alpha = (0,) * symbol.nvars
    memo[zero_alpha] = e

    def deriv(alpha: tuple) -> PsiPowerElement:
        got = memo.get(alpha)
        if got is not None:
            return got
        v = max(i for i, a in enumerate(alpha) if a)
        prev = alpha[:v] + (alpha[v] - 1,) + alpha[v + 1:]
        res = apply_partial(deriv(prev), v)
        memo[alpha] = res
        return res

    total: PsiPowerElement | None = None
    # lexicographic order maximises prefix sharing in the memo
    for alpha, c in sorted(symbol.terms().items()):
        term = deriv(alpha).scale(c)
        total = term if total is None else total + term
    if total is None:
        return PsiPowerElement(e.frame, e.offset, ParamPoly.zero(e.frame.nvars))
    return total


def apply_dop(p: SparsePoly, e: PsiPowerElement) -> PsiPowerElement:
    """Apply the constant-coefficient operator ``d(p)`` attached to ``p``."""
    return _apply_symbol(e.frame.dual_symbol(p), e)


@dataclass(frozen=True)
class CapelliResult:
    """``C_{s,l}(Psi^(-m) f) = Psi^(-m - exponent) * payload(s; x)``."""

    payload: ParamPoly
    exponent: int
    m_shift: Fraction

    def at(self, s) -> SparsePoly:
        return self.payload.eval_s(s)


def capelli_apply(frame: CoordinateFrame, l: int, m_shift, f: SparsePoly) -> CapelliResult:
    """Apply ``C_{s,l}`` to ``Psi^(-m_shift) f``.

    The calculus runs on ``Psi^(-t) f`` with ``t = s + m``; afterwards
    ``t`` is shifted back.  The certificate ``exponent`` is ``l(2r - 1)``.
    """
    if l < 0:
        raise ValueError("l must be nonnegative")
    m = Fraction(m_shift)
    e = PsiPowerElement.power(frame, f)
    sym = frame.laplace_symbol
    for _ in range(l):
        e = _apply_symbol(sym, e)
    r = frame.r
    assert e.offset == 2 * r * l
    M = l * (2 * r - 1)
    payload = e.payload.shift(m) if m else e.payload
    return CapelliResult(payload, M, m)


# -- operator matrices ------------------------------------------------------
def param_identity(n: int) -> list[list[ParamPoly]]:
    one = ParamPoly.from_scalars([1])
    zero = ParamPoly.zero(0)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(a: list[list[ParamPoly]], b: list[list[ParamPoly]]) -> list[list[ParamPoly]]:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ParamPoly.zero(0)
            for t in range(k):
                if a[i][t] and b[t][j]:
                    acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


@dataclass
class OperatorMatrix:
    """Matrix ``B(s)`` with ``C_{s,l}(Psi^-m p_i) = Psi^-m sum_j B(s)[j][i] p_j``."""

    entries: list[list[ParamPoly]]
    d: int
    n: int
    r: int
    m: Fraction
    l: int
    method: str = "calculus"
    notes: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.entries)

    def at(self, s) -> list[list]:
        return [[e.eval_scalar(s) if e else 0 for e in row] for row in self.entries]

    def s_degree(self) -> int:
        return max((e.degree for row in self.entries for e in row if e), default=-1)

    def coefficient_matrix(self, k: int) -> list[list]:
        return [[e.coeff(k).constant_term() if e else 0 for e in row] for row in self.entries]

    def __matmul__(self, other: "OperatorMatrix") -> list[list[ParamPoly]]:
        return matmul(self.entries, other.entries)

    def shifted(self, c) -> list[list[ParamPoly]]:
        """Entries of ``B(s + c)``."""
        return [[e.shift(c) if e else e for e in row] for row in self.entries]


def _coords_calculus(space, l: int) -> list[list[list]]:
    """Per basis element: list over s-powers of coordinate vectors."""
    frame = space.frame
    basis = space.basis
    coords = LinearCoordinates([b.packed for b in basis])
    out = []
    psiM = None
    for f in basis:
        res = capelli_apply(frame, l, space.psi_exponent, f)
        if psiM is None:
            psiM = frame.psi ** res.exponent
        per_power = []
        for k in range(len(res.payload.coeffs)):
            q = res.payload.coeff(k)
            if not q:
                per_power.append([0] * len(basis))
                continue
            quo = q.divexact(psiM)
            if quo is None:
                raise ImageNotInSpan(f"C_(s,{l}) image is not divisible by Psi^{res.exponent}")
            per_power.append(coords.coordinates(quo.packed))
        out.append(per_power)
    return out


# -- pointwise (Taylor) route ----------------------------------------------
def _downset(symbol: SparsePoly) -> set:
    """Packed keys of all monomials dividing some monomial of ``symbol``."""
    seen = set()
    stack = list(symbol.terms())
    while stack:
        a = stack.pop()
        if a in seen:
            continue
        seen.add(a)
        for i, e in enumerate(a):
            if e:
                b = a[:i] + (e - 1,) + a[i + 1:]
                if b not in seen:
                    stack.append(b)
    return {pack(a, symbol.nvars) for a in seen}


def _truncate(p: SparsePoly, keep: set) -> SparsePoly:
    """Restrict to packed monomial keys in ``keep``."""
    return SparsePoly._make(p.nvars, {k: c for k, c in p.packed.items() if k in keep})


def _factorials(alpha) -> int:
    out = 1
    for a in alpha:
        for j in range(2, a + 1):
            out *= j
    return out


class _PointFunctional:
    """``f -> L^l(Psi^(-t) f)(x) * Psi(x)^t`` as a polynomial in ``t``, at one point.

    With ``u(h) = (Psi(x+h) - Psi(x)) / Psi(x)`` one has
    ``Psi(x+h)^(-t) = Psi(x)^(-t) sum_j binom(-t, j) u^j`` and only Taylor
    coefficients inside the down-set of the symbol contribute.  The pairing of
    the symbol with ``u^j`` is precomputed as weights on Taylor coefficients
    of ``f`` at ``x``.
    """

    def __init__(self, frame: CoordinateFrame, symbol: SparsePoly, keep: set, point: Sequence):
        N = frame.nvars
        self.point = list(point)
        self.hs = [SparsePoly.variable(i, N) + SparsePoly.constant(point[i], N) for i in range(N)]
        psi_x = frame.psi.evaluate(self.point)
        self.psi_x = psi_x
        # work with Psi(x) * u to stay in integers for integer points
        du = _truncate(frame.psi.substitute(self.hs) - psi_x, keep)
        sym = [(pack(alpha, N), c * _factorials(alpha)) for alpha, c in symbol.terms().items()]
        max_order = symbol.total_degree()
        guard = guard_for(N)
        # weights[j][beta] = sum_alpha c_alpha alpha! [(Psi(x) u)^j]_(alpha - beta)
        self.weights: list[dict] = []
        uj = SparsePoly.one(N)
        for j in range(max_order + 1):
            w: dict = {}
            ut = uj.packed
            for ka, c in sym:
                t = ka | guard
                for kg, v in ut.items():
                    rr = t - kg
                    if rr & guard == guard:
                        kb = rr ^ guard
                        w[kb] = w.get(kb, 0) + c * v
            self.weights.append({k: v for k, v in w.items() if v})
            uj = SparsePoly._make(N, K.mul_trunc(uj.packed, du.packed, keep))
            if not uj:
                break
        self.binoms = []
        binom = [Fraction(1)]
        for j in range(len(self.weights)):
            self.binoms.append([c / psi_x ** j for c in binom])
            nb = [Fraction(0)] * (len(binom) + 1)
            for i, c in enumerate(binom):
                nb[i] += c * (-j) / (j + 1)
                nb[i + 1] += c * (-1) / (j + 1)
            binom = nb

    def __call__(self, f: SparsePoly) -> list:
        g = f.substitute(self.hs).packed
        out: list = []
        for w, binom in zip(self.weights, self.binoms):
            val = 0
            for beta, c in w.items():
                x = g.get(beta)
                if x:
                    val += c * x
            if val:
                while len(out) < len(binom):
                    out.append(Fraction(0))
                for i, c in enumerate(binom):
                    out[i] += c * val
        return out


def _rational_point(frame: CoordinateFrame, rng: random.Random) -> list:
    # Wirtinger identities are polynomial identities in independent z, zb,
    # so plain rational values are valid for every variable.
    return [rng.randint(-4, 4) for _ in range(frame.nvars)]


def _coords_pointwise(space, l: int, seed: int = 0, extra: int = 4) -> list[list[list]]:
    """Interpolate ``B(s)`` from exact values at random rational points.

    ``dim + extra`` points are used; the extra points check that the image
    lies in the span (a failed check raises :class:`ImageNotInSpan`).
    """
    frame = space.frame
    basis = space.basis
    dim = len(basis)
    rng = random.Random(seed)
    symbol = frame.laplace_symbol ** l
    keep = _downset(symbol)
    mexp = Fraction(space.psi_exponent)
    pts = []
    evals = []
    while len(pts) < dim + extra:
        x = _rational_point(frame, rng)
        if not frame.psi.evaluate(x):
            continue
        pts.append(x)
        evals.append([b.evaluate(x) for b in basis])
    # choose dim rows with an invertible evaluation matrix
    chosen: list[int] = []
    from .exactcore.linalg import matrix_rank

    for i in range(len(pts)):
        trial = chosen + [i]
        if matrix_rank([{j: evals[t][j] for j in range(dim)} for t in trial], list(range(dim))) == len(trial):
            chosen = trial
        if len(chosen) == dim:
            break
    if len(chosen) < dim:
        raise ImageNotInSpan("could not find interpolation points in general position")
    inv = inverse([evals[t] for t in chosen])
    checks = [i for i in range(len(pts)) if i not in chosen]
    functionals = [_PointFunctional(frame, symbol, keep, x) for x in pts]
    out = []
    for f in basis:
        # value of Psi^m * C_{s,l}(Psi^-m f) at x equals Psi(x)^l E(s + m)
        vals = []
        for fn in functionals:
            E = ParamPoly.from_scalars(fn(f)).shift(mexp)
            vals.append(E * (fn.psi_x ** l))
        deg = max(v.degree for v in vals)
        per_power = []
        for k in range(deg + 1):
            rhs = [vals[t].coeff(k).constant_term() for t in chosen]
            c = [simplify_scalar(sum((a * b for a, b in zip(row, rhs)), Fraction(0))) for row in inv]
            for t in checks:
                pred = sum((a * b for a, b in zip(c, evals[t])), Fraction(0))
                if pred != vals[t].coeff(k).constant_term():
                    raise ImageNotInSpan("pointwise image is not in the span of the basis")
            per_power.append(c)
        out.append(per_power)
    return out


def operator_matrix(space, l: int = 1, method: str = "calculus", seed: int = 0) -> OperatorMatrix:
    """Exact matrix of ``C_{s,l}`` on ``Psi^(-m) * span(space.basis)``.

    ``method`` is ``"calculus"`` (monomial matching after exact division by
    ``Psi^M``) or ``"pointwise"`` (exact Taylor evaluation at rational points
    and interpolation; for spaces where the symbolic payloads get large).
    ``"auto"`` picks calculus for r = 1 and pointwise otherwise, which is the
    faster route in each regime.
    """
    if method == "auto":
        method = "calculus" if space.frame.r == 1 else "pointwise"
    if method == "calculus":
        cols = _coords_calculus(space, l)
    elif method == "pointwise":
        cols = _coords_pointwise(space, l, seed=seed)
    else:
        raise ValueError(f"unknown method {method!r}")
    dim = len(space.basis)
    entries = [[None] * dim for _ in range(dim)]
    for i, per_power in enumerate(cols):
        for j in range(dim):
            entries[j][i] = ParamPoly.from_scalars([pp[j] for pp in per_power]) if per_power else ParamPoly.zero(0)
    frame = space.frame
    return OperatorMatrix(entries, frame.d, frame.n, frame.r, Fraction(space.psi_exponent), l, method)
