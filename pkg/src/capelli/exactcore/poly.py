"""Sparse multivariate polynomials over exact scalars.

``SparsePoly`` is immutable.  Terms live in a dict keyed by packed exponent
vectors (see :mod:`capelli.exactcore._kernels_py`); the public surface speaks
exponent tuples.  The monomial order is graded lexicographic with
``x0 > x1 > ...`` everywhere (leading terms, printing, square-root sign).

``ParamPoly`` is a polynomial in one formal parameter ``s`` whose coefficients
are ``SparsePoly`` in a fixed number of variables.
"""

from __future__ import annotations

import heapq
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import kernels as K
from .scalars import GaussRational, simplify_scalar

__all__ = [
    "SparsePoly",
    "ParamPoly",
    "NotAPerfectSquare",
    "VariableCountMismatch",
    "poly_sqrt",
]


class VariableCountMismatch(ValueError):
    pass


class NotAPerfectSquare(ValueError):
    pass


def _shifts(nvars: int) -> list[int]:
    return [K.BITS * (nvars - 1 - i) for i in range(nvars)]


_SHIFT_CACHE: dict[int, list[int]] = {}
_GUARD_CACHE: dict[int, int] = {}


def shifts_for(nvars: int) -> list[int]:
    s = _SHIFT_CACHE.get(nvars)
    if s is None:
        s = _SHIFT_CACHE[nvars] = _shifts(nvars)
    return s


def guard_for(nvars: int) -> int:
    g = _GUARD_CACHE.get(nvars)
    if g is None:
        g = _GUARD_CACHE[nvars] = K.guard_mask(nvars)
    return g


def pack(exps: Sequence[int], nvars: int) -> int:
    if len(exps) != nvars:
        raise VariableCountMismatch(f"exponent vector of length {len(exps)} for {nvars} variables")
    key = 0
    for e in exps:
        if e < 0 or e > K.MAX_EXP:
            raise ValueError(f"exponent {e} out of range")
        key = (key << K.BITS) | e
    return key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> sh) & K.VALUE_MASK for sh in shifts_for(nvars))


def key_degree(key: int, nvars: int) -> int:
    d = 0
    for _ in range(nvars):
        d += key & K.VALUE_MASK
        key >>= K.BITS
    return d


def exact_div(a, b):
    """Exact quotient of scalars, keeping ints when possible."""
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        return q if r == 0 else Fraction(a, b)
    if isinstance(b, int):
        b = Fraction(b)
    return simplify_scalar(a / b)


class SparsePoly:
    """Immutable sparse polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "_t", "_deg")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | None = None):
        self.nvars = nvars
        t: dict[int, object] = {}
        if terms:
            for exps, c in terms.items():
                if c:
                    k = pack(tuple(exps), nvars)
                    t[k] = t.get(k, 0) + c
            t = {k: v for k, v in t.items() if v}
        self._t = t
        self._deg = None

    @classmethod
    def _make(cls, nvars: int, packed: dict, deg: int | None = None) -> "SparsePoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p._t = packed
        p._deg = deg
        return p

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "SparsePoly":
        return cls._make(nvars, {}, -1)

    @classmethod
    def constant(cls, c, nvars: int) -> "SparsePoly":
        return cls._make(nvars, {0: c} if c else {}, 0 if c else -1)

    @classmethod
    def one(cls, nvars: int) -> "SparsePoly":
        return cls.constant(1, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "SparsePoly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable {i} not in 0..{nvars - 1}")
        return cls._make(nvars, {1 << shifts_for(nvars)[i]: 1}, 1)

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "SparsePoly":
        n = len(exps)
        return cls._make(n, {pack(exps, n): c} if c else {}, None)

    @classmethod
    def variables(cls, nvars: int) -> list["SparsePoly"]:
        return [cls.variable(i, nvars) for i in range(nvars)]

    # -- inspection ---------------------------------------------------------
    @property
    def packed(self) -> dict:
        """Read-only view of the packed term dict (do not mutate)."""
        return self._t

    def terms(self) -> dict[tuple[int, ...], object]:
        """Exponent tuple -> coefficient, in decreasing graded-lex order."""
        n = self.nvars
        return {unpack(k, n): self._t[k] for k in self._sorted_keys()}

    def _sorted_keys(self) -> list[int]:
        n = self.nvars
        return sorted(self._t, key=lambda k: (key_degree(k, n), k), reverse=True)

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def total_degree(self) -> int:
        """Largest total degree; -1 for the zero polynomial."""
        if self._deg is None:
            n = self.nvars
            self._deg = max((key_degree(k, n) for k in self._t), default=-1)
        return self._deg

    def min_degree(self) -> int:
        n = self.nvars
        return min((key_degree(k, n) for k in self._t), default=-1)

    def degree_in(self, i: int) -> int:
        sh = shifts_for(self.nvars)[i]
        return max(((k >> sh) & K.VALUE_MASK for k in self._t), default=-1)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        n = self.nvars
        degs = {key_degree(k, n) for k in self._t}
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return degree is None or degs == {degree}

    def coefficient(self, exps: Sequence[int]):
        return self._t.get(pack(tuple(exps), self.nvars), 0)

    def constant_term(self):
        return self._t.get(0, 0)

    def leading_term(self) -> tuple[tuple[int, ...], object]:
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        n = self.nvars
        k = max(self._t, key=lambda k: (key_degree(k, n), k))
        return unpack(k, n), self._t[k]

    def _leading_key(self) -> int:
        n = self.nvars
        return max(self._t, key=lambda k: (key_degree(k, n), k))

    def coefficients(self) -> list:
        return list(self._t.values())

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "SparsePoly"):
        if other.nvars != self.nvars:
            raise VariableCountMismatch(f"{self.nvars} vs {other.nvars} variables")

    def _coerce(self, other):
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, GaussRational)):
            return SparsePoly.constant(other, self.nvars)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return SparsePoly._make(self.nvars, K.add(self._t, o._t))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return SparsePoly._make(self.nvars, K.add(self._t, o._t, -1))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return SparsePoly._make(self.nvars, {k: -v for k, v in self._t.items()}, self._deg)

    def __mul__(self, other):
        if isinstance(other, SparsePoly):
            self._check(other)
            da, db = self.total_degree(), other.total_degree()
            if da < 0 or db < 0:
                return SparsePoly.zero(self.nvars)
            if da + db > K.MAX_EXP:
                raise OverflowError("product degree exceeds packed exponent range")
            return SparsePoly._make(self.nvars, K.mul(self._t, other._t))
        if isinstance(other, (int, Fraction, GaussRational)):
            return SparsePoly._make(self.nvars, K.scale(self._t, other), self._deg if other else -1)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, (int, Fraction, GaussRational)):
            if isinstance(c, int):
                c = Fraction(c)
            return self * (1 / c)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = SparsePoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return self.nvars == other.nvars and self._t == other._t
        if isinstance(other, (int, Fraction, GaussRational)):
            if not other:
                return not self._t
            return self._t == {0: other}
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self._t.items())))

    def mul_monomial(self, exps: Sequence[int], c=1) -> "SparsePoly":
        return SparsePoly._make(self.nvars, K.mul_term(self._t, pack(exps, self.nvars), c))

    def map_coefficients(self, f) -> "SparsePoly":
        return SparsePoly._make(self.nvars, {k: v for k, v in ((k, f(v)) for k, v in self._t.items()) if v})

    # -- calculus -----------------------------------------------------------
    def diff(self, i: int) -> "SparsePoly":
        """Partial derivative in variable ``i``."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable {i} not in 0..{self.nvars - 1}")
        return SparsePoly._make(self.nvars, K.deriv(self._t, shifts_for(self.nvars)[i]))

    def apply_diffop(self, symbol: "SparsePoly | DiffOp") -> "SparsePoly":
        """Apply ``symbol(d/dx0, ..., d/dx_{n-1})`` to this polynomial."""
        op = symbol if isinstance(symbol, DiffOp) else DiffOp(symbol)
        if op.nvars != self.nvars:
            raise VariableCountMismatch(f"{op.nvars} vs {self.nvars} variables")
        return SparsePoly._make(self.nvars, K.apply_diffop(op.terms, self._t, guard_for(self.nvars)))

    def evaluate(self, point: Sequence, one=1):
        """Evaluate at a point; evaluation is a ring homomorphism."""
        if len(point) != self.nvars:
            raise VariableCountMismatch(f"point of length {len(point)} for {self.nvars} variables")
        return K.evaluate(self._t, shifts_for(self.nvars), list(point), one)

    __call__ = evaluate

    def substitute(self, values: Sequence["SparsePoly"]) -> "SparsePoly":
        """Compose: replace variable i by ``values[i]`` (all in a common ring)."""
        if len(values) != self.nvars:
            raise VariableCountMismatch("substitution length mismatch")
        if not values:
            return self
        target_n = values[0].nvars
        out = SparsePoly.zero(target_n)
        cache: list[dict[int, SparsePoly]] = [dict() for _ in values]
        shifts = shifts_for(self.nvars)
        for k, c in self._t.items():
            term = SparsePoly.constant(c, target_n)
            for i, sh in enumerate(shifts):
                e = (k >> sh) & K.VALUE_MASK
                if e:
                    p = cache[i].get(e)
                    if p is None:
                        p = cache[i][e] = values[i] ** e
                    term = term * p
            out = out + term
        return out

    def scale_variables(self, factors: Sequence) -> "SparsePoly":
        """Return p(f0*x0, f1*x1, ...)."""
        n = self.nvars
        shifts = shifts_for(n)
        out = {}
        for k, c in self._t.items():
            v = c
            for i, sh in enumerate(shifts):
                e = (k >> sh) & K.VALUE_MASK
                if e:
                    v = v * factors[i] ** e
            if v:
                out[k] = v
        return SparsePoly._make(n, out, self._deg)

    def embed(self, nvars: int, positions: Sequence[int]) -> "SparsePoly":
        """Re-express in a larger ring, variable i going to ``positions[i]``."""
        out = {}
        for k, c in self._t.items():
            exps = [0] * nvars
            for i, e in enumerate(unpack(k, self.nvars)):
                exps[positions[i]] += e
            out[pack(exps, nvars)] = c
        return SparsePoly._make(nvars, out, self._deg)

    # -- division -----------------------------------------------------------
    def divexact(self, other: "SparsePoly") -> "SparsePoly | None":
        """Quotient when ``other`` divides ``self`` exactly, else ``None``."""
        self._check(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        n = self.nvars
        guard = guard_for(n)
        bdeg = {k: key_degree(k, n) for k in other._t}
        lk = max(other._t, key=lambda k: (bdeg[k], k))
        lc = other._t[lk]
        ldeg = bdeg[lk]
        rest = [(k, c, bdeg[k]) for k, c in other._t.items() if k != lk]
        r = dict(self._t)
        heap = [(-key_degree(k, n), -k) for k in r]
        heapq.heapify(heap)
        q = {}
        while heap:
            nd, nk = heapq.heappop(heap)
            k = -nk
            c = r.pop(k, None)
            if c is None:
                continue
            t = (k | guard) - lk
            if t & guard != guard:
                return None
            qk = t ^ guard
            qc = exact_div(c, lc)
            q[qk] = qc
            qd = -nd - ldeg
            for bk, bc, bd in rest:
                nkk = qk + bk
                old = r.get(nkk)
                if old is None:
                    r[nkk] = -qc * bc
                    heapq.heappush(heap, (-(qd + bd), -nkk))
                else:
                    v = old - qc * bc
                    if v:
                        r[nkk] = v
                    else:
                        del r[nkk]
        return SparsePoly._make(n, q)

    # -- printing -----------------------------------------------------------
    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self._t:
            return "0"
        n = self.nvars
        names = names or [f"x{i}" for i in range(n)]
        parts = []
        for k in self._sorted_keys():
            c = self._t[k]
            mono = []
            for i, e in enumerate(unpack(k, n)):
                if e == 1:
                    mono.append(names[i])
                elif e:
                    mono.append(f"{names[i]}^{e}")
            parts.append(_term_str(c, "*".join(mono)))
        return _join_terms(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"SparsePoly({self.nvars}, {self.to_str()})"


def _term_str(c, mono: str) -> str:
    if isinstance(c, GaussRational) and c.im != 0:
        cs = f"({c})"
        return f"{cs}*{mono}" if mono else cs
    if not mono:
        return str(c)
    if c == 1:
        return mono
    if c == -1:
        return f"-{mono}"
    return f"{c}*{mono}"


def _join_terms(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-"):
            out += f" - {p[1:]}"
        else:
            out += f" + {p}"
    return out


class DiffOp:
    """A constant-coefficient differential operator ``sum c_a d^a`` prepared for the kernels."""

    __slots__ = ("nvars", "symbol", "terms", "order")

    def __init__(self, symbol: SparsePoly):
        n = symbol.nvars
        self.nvars = n
        self.symbol = symbol
        shifts = shifts_for(n)
        terms = []
        for k, c in symbol.packed.items():
            supp = tuple((sh, (k >> sh) & K.VALUE_MASK) for sh in shifts if (k >> sh) & K.VALUE_MASK)
            terms.append((k, c, supp))
        self.terms = terms
        self.order = symbol.total_degree()

    def __call__(self, p: SparsePoly) -> SparsePoly:
        return p.apply_diffop(self)


def _rational_sqrt(c) -> Fraction | int:
    if isinstance(c, GaussRational):
        if c.im != 0:
            raise NotAPerfectSquare(f"coefficient {c} is not a rational square")
        c = c.re
    c = Fraction(c)
    if c < 0:
        raise NotAPerfectSquare(f"negative leading coefficient {c}")
    a, b = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if a * a != c.numerator or b * b != c.denominator:
        raise NotAPerfectSquare(f"coefficient {c} is not a rational square")
    return simplify_scalar(Fraction(a, b))


def poly_sqrt(p: SparsePoly) -> SparsePoly:
    """Exact square root ``q`` with ``q*q == p`` and positive graded-lex leading coefficient.

    Raises
    ------
    NotAPerfectSquare
        When ``p`` has no polynomial square root over the rationals.
    """
    if not p:
        raise ValueError("poly_sqrt of the zero polynomial")
    n = p.nvars
    guard = guard_for(n)
    lk = p._leading_key()
    lc = p.packed[lk]
    half = 0
    for sh in shifts_for(n):
        e = (lk >> sh) & K.VALUE_MASK
        if e % 2:
            raise NotAPerfectSquare("leading monomial has an odd exponent")
        half |= (e // 2) << sh
    q = {half: _rational_sqrt(lc)}
    q_lead_key, q_lead_c = half, q[half]
    lowest = (p.min_degree() + 1) // 2 if p.min_degree() % 2 else p.min_degree() // 2
    qpoly = SparsePoly._make(n, dict(q))
    r = p - qpoly * qpoly
    two_lead = 2 * q_lead_c
    while r:
        rk = r._leading_key()
        t = (rk | guard) - q_lead_key
        if t & guard != guard:
            raise NotAPerfectSquare("remainder not divisible by the leading term")
        tk = t ^ guard
        if key_degree(tk, n) < lowest:
            raise NotAPerfectSquare("remainder below the admissible degree")
        tc = exact_div(r.packed[rk], two_lead)
        term = SparsePoly._make(n, {tk: tc})
        # (q + t)^2 - p = (q^2 - p) + 2qt + t^2
        r = r - 2 * qpoly * term - term * term
        qpoly = qpoly + term
    return qpoly


class ParamPoly:
    """Polynomial in a formal parameter ``s`` with ``SparsePoly`` coefficients.

    ``coeffs[i]`` multiplies ``s**i``; trailing zero coefficients are stripped,
    so the zero ParamPoly has an empty coefficient tuple.
    """

    __slots__ = ("nvars", "coeffs")

    def __init__(self, coeffs: Iterable[SparsePoly], nvars: int | None = None):
        cs = list(coeffs)
        if nvars is None:
            if not cs:
                raise ValueError("nvars required for an empty coefficient list")
            nvars = cs[0].nvars
        for c in cs:
            if c.nvars != nvars:
                raise VariableCountMismatch("ParamPoly coefficients disagree on nvars")
        while cs and not cs[-1]:
            cs.pop()
        self.nvars = nvars
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, nvars: int) -> "ParamPoly":
        return cls((), nvars)

    @classmethod
    def from_poly(cls, p: SparsePoly) -> "ParamPoly":
        return cls((p,), p.nvars)

    @classmethod
    def s(cls, nvars: int = 0) -> "ParamPoly":
        return cls((SparsePoly.zero(nvars), SparsePoly.one(nvars)), nvars)

    @classmethod
    def from_scalars(cls, values: Sequence, nvars: int = 0) -> "ParamPoly":
        """Univariate polynomial in ``s`` from its coefficient list (constant first)."""
        return cls([SparsePoly.constant(v, nvars) for v in values], nvars)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> SparsePoly:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return SparsePoly.zero(self.nvars)

    def leading_coefficient(self) -> SparsePoly:
        if not self.coeffs:
            return SparsePoly.zero(self.nvars)
        return self.coeffs[-1]

    def scalar_coeffs(self) -> list:
        """Coefficients as scalars (requires nvars == 0)."""
        if self.nvars != 0:
            raise ValueError("scalar_coeffs needs a ParamPoly without x-variables")
        return [c.constant_term() for c in self.coeffs]

    def _coerce(self, other):
        if isinstance(other, ParamPoly):
            if other.nvars != self.nvars:
                raise VariableCountMismatch(f"{self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, SparsePoly):
            if other.nvars != self.nvars:
                raise VariableCountMismatch(f"{self.nvars} vs {other.nvars} variables")
            return ParamPoly((other,), self.nvars)
        if isinstance(other, (int, Fraction, GaussRational)):
            return ParamPoly((SparsePoly.constant(other, self.nvars),), self.nvars)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        z = SparsePoly.zero(self.nvars)
        return ParamPoly(
            [(self.coeffs[i] if i < len(self.coeffs) else z) + (o.coeffs[i] if i < len(o.coeffs) else z) for i in range(n)],
            self.nvars,
        )

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly([-c for c in self.coeffs], self.nvars)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            return ParamPoly([c * other for c in self.coeffs], self.nvars)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return ParamPoly.zero(self.nvars)
        out = [SparsePoly.zero(self.nvars) for _ in range(len(self.coeffs) + len(o.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return ParamPoly(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = ParamPoly.from_poly(SparsePoly.one(self.nvars))
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, ParamPoly) else other
        if o is None:
            return NotImplemented
        return self.nvars == o.nvars and self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.nvars, self.coeffs))

    def eval_s(self, value) -> SparsePoly:
        """Substitute a scalar for ``s`` (a ring homomorphism)."""
        out = SparsePoly.zero(self.nvars)
        for c in reversed(self.coeffs):
            out = out * value + c
        return out

    def eval_scalar(self, value):
        """Scalar value at ``s = value`` (nvars == 0 only)."""
        return self.eval_s(value).constant_term()

    def shift(self, c) -> "ParamPoly":
        """Return ``P(s + c)``."""
        out = ParamPoly.zero(self.nvars)
        lin = ParamPoly((SparsePoly.constant(c, self.nvars), SparsePoly.one(self.nvars)), self.nvars)
        for coeff in reversed(self.coeffs):
            out = out * lin + coeff
        return out

    def evaluate_x(self, point: Sequence) -> "ParamPoly":
        """Evaluate the x-variables, leaving a univariate polynomial in ``s``."""
        return ParamPoly.from_scalars([c.evaluate(point) for c in self.coeffs], 0)

    def map_coefficients(self, f) -> "ParamPoly":
        return ParamPoly([f(c) for c in self.coeffs], self.nvars)

    def diff(self, i: int) -> "ParamPoly":
        return ParamPoly([c.diff(i) for c in self.coeffs], self.nvars)

    def x_degree(self) -> int:
        return max((c.total_degree() for c in self.coeffs), default=-1)

    def to_str(self, names: Sequence[str] | None = None, var: str = "s") -> str:
        """Canonical expanded form, highest power of ``s`` first."""
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            sp = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if self.nvars == 0:
                parts.append(_term_str(c.constant_term(), sp))
            else:
                cs = c.to_str(names)
                if not sp:
                    parts.append(cs)
                elif len(c) == 1 and "+" not in cs and " - " not in cs:
                    parts.append(sp if cs == "1" else (f"-{sp}" if cs == "-1" else f"{cs}*{sp}"))
                else:
                    parts.append(f"({cs})*{sp}")
        return _join_terms(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"ParamPoly({self.to_str()})"
