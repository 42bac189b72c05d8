"""Closed-form eigenvalues in exact arithmetic.

``q_l(t, z) = prod_{i<l} prod_j ((t + 2i)^2 - z_j^2)`` and
``c_{s,l}(z) = q_l(2s - rho_1, z)``; the eigenvalue of ``C_{s,l}`` on the
K-type ``mu`` is ``c_{s,l}(mu + rho)``.  The Radon layer uses the generalized
Pochhammer symbol ``(c)_m = prod_j (c - d(j-1)/2)_{m_j}``.

Gamma functions are never evaluated: ratios of Gindikin Gamma functions with
integer argument gaps are reduced to Pochhammer products.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactcore import ParamPoly
from .ktypes import EvenPartition, GrassmannStructure, RankViolation

__all__ = [
    "PolePochhammer",
    "ParityViolation",
    "DegenerateConstant",
    "NonTelescoping",
    "WrongDivisionAlgebra",
    "ConditionViolation",
    "HCImage",
    "RadonSpec",
    "q_l",
    "c_sl",
    "line_bundle_eigenvalue",
    "pochhammer",
    "gen_pochhammer",
    "eta_mu",
    "gamma_mu",
    "inversion_eigenvalue",
    "inversion_constant",
    "gindikin_identity_check",
    "gindikin_specialization",
    "radon_cases",
    "partitions_up_to",
    "gindikin_grid",
    "radial_eigenvalue",
]


class PolePochhammer(ZeroDivisionError):
    pass


class ParityViolation(ValueError):
    pass


class DegenerateConstant(ArithmeticError):
    pass


class NonTelescoping(ValueError):
    pass


class WrongDivisionAlgebra(ValueError):
    pass


class ConditionViolation(ValueError):
    pass


def _parts(mu) -> tuple:
    return tuple(mu.parts) if isinstance(mu, EvenPartition) else tuple(mu)


def _halves(mu) -> tuple[int, ...]:
    parts = _parts(mu)
    if any(x % 2 for x in parts):
        raise ValueError(f"{parts} is not an even partition")
    return tuple(x // 2 for x in parts)


def q_l(t, z: Sequence, l: int = 1):
    """``prod_{i<l} prod_j ((t + 2i)^2 - z_j^2)``; ``t`` may be a ParamPoly."""
    out = 1
    for i in range(l):
        for zj in z:
            u = t + 2 * i
            out = out * (u * u - zj * zj)
    if isinstance(out, int):
        out = Fraction(out)
    return out


@dataclass(frozen=True)
class HCImage:
    """Harish-Chandra images of ``C_{s,l}`` for ``Gr_{n,r}(F)``."""

    d: int
    n: int
    r: int
    l: int = 1

    @property
    def rho(self) -> tuple:
        return GrassmannStructure(self.d, self.n, self.r).rho

    def q(self, t, z):
        return q_l(t, z, self.l)

    def c(self, s, z, p: int = 0):
        """``q_l(2s - rho_1 - p, z)``; ``s = None`` gives a ParamPoly in s."""
        t = ParamPoly.from_scalars([-self.rho[0] - p, 2]) if s is None else 2 * Fraction(s) - self.rho[0] - p
        return q_l(t, z, self.l)

    def at_type(self, s, mu, p: int = 0):
        z = [Fraction(x) + y for x, y in zip(_parts(mu), self.rho)]
        return self.c(s, z, p)


def c_sl(d: int, n: int, r: int, s, mu=None, l: int = 1, z: Sequence | None = None):
    """Eigenvalue ``c_{s,l}(mu + rho)`` (or ``c_{s,l}(z)`` when ``z`` is given).

    ``s = None`` returns the formal polynomial in ``s``.
    """
    h = HCImage(d, n, r, l)
    if z is not None:
        return h.c(s, [Fraction(x) for x in z])
    if mu is None:
        mu = (0,) * r
    return h.at_type(s, mu)


def line_bundle_eigenvalue(d: int, n: int, r: int, s, p: int, mu, l: int = 1):
    """``q_l(2s - rho_1 - p, mu + rho)`` on the twisted K-type ``mu`` in ``Lambda_|p|``."""
    if d != 2:
        raise WrongDivisionAlgebra("line bundles are defined here for F = C only")
    parts = _parts(mu)
    b = abs(p)
    if len(parts) != r or any(x < b or (x - b) % 2 for x in parts) or any(x < y for x, y in zip(parts, parts[1:])):
        raise ValueError(f"{parts} is not in Lambda_{b}")
    return HCImage(d, n, r, l).at_type(s, parts, p)


# -- Pochhammer symbols -----------------------------------------------------
def pochhammer(a, k: int):
    """Rising factorial ``(a)_k``."""
    out = Fraction(1) if not isinstance(a, ParamPoly) else ParamPoly.from_scalars([1])
    for i in range(k):
        out = out * (a + i)
    return out


def gen_pochhammer(c, m: Sequence[int], d: int):
    """``(c)_m = prod_j (c - d(j-1)/2)_{m_j}``."""
    out = Fraction(1)
    for j, mj in enumerate(m):
        out = out * pochhammer(Fraction(c) - Fraction(d * j, 2), mj)
    return out


def eta_mu(nu, mu, d: int, n: int) -> Fraction:
    """``(-1)^|m| (-nu)_m / (dn/2 + nu)_m`` with ``m = mu/2``."""
    m = _halves(mu)
    nu = Fraction(nu)
    den = gen_pochhammer(Fraction(d * n, 2) + nu, m, d)
    if den == 0:
        raise PolePochhammer(f"(dn/2 + nu)_m vanishes at nu={nu}, mu={_parts(mu)}")
    sign = -1 if sum(m) % 2 else 1
    return sign * gen_pochhammer(-nu, m, d) / den


# -- Radon data -------------------------------------------------------------
@dataclass(frozen=True)
class RadonSpec:
    """Parameters of the pair ``R: functions on Gr_{n,r} -> functions on Gr_{n,r'}``."""

    d: int
    n: int
    r: int
    rprime: int

    def __post_init__(self):
        if self.d not in (1, 2, 4):
            raise ValueError(f"d must be 1, 2 or 4, got {self.d}")
        if not 1 <= self.r <= self.n - self.r:
            raise RankViolation(f"need 1 <= r <= n - r, got n={self.n}, r={self.r}")
        if not self.r <= self.rprime:
            raise ConditionViolation(f"need r <= r', got r={self.r}, r'={self.rprime}")

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.d * self.r, 2)

    @property
    def beta(self) -> Fraction:
        return Fraction(self.d * (self.n - self.rprime), 2)

    @property
    def l(self) -> Fraction:
        return Fraction(self.d * (self.rprime - self.r), 2)

    @property
    def condition_i(self) -> bool:
        return self.r <= self.rprime <= self.n - self.r

    @property
    def condition_ii(self) -> bool:
        return self.l.denominator == 1

    @property
    def inversion_valid(self) -> bool:
        return self.condition_i and self.condition_ii

    @property
    def structure(self) -> GrassmannStructure:
        return GrassmannStructure(self.d, self.n, self.r)

    def check_inversion_conditions(self):
        if not self.condition_i:
            raise ConditionViolation(f"need r <= r' <= n - r, got r={self.r}, r'={self.rprime}, n={self.n}")
        if not self.condition_ii:
            raise ParityViolation(f"l = d(r'-r)/2 = {self.l} is not an integer")


def gamma_mu(radon: RadonSpec, mu) -> Fraction:
    """Eigenvalue of ``R'R`` on the K-type ``mu``; both closed forms must agree."""
    d, n = radon.d, radon.n
    if len(_parts(mu)) != radon.r:
        raise ValueError("mu must have length r")
    m = _halves(mu)
    a, b, l = radon.alpha, radon.beta, radon.l
    via_eta = eta_mu(-a, mu, d, n) * eta_mu(-b, mu, d, n)
    den = gen_pochhammer(a + l, m, d) * gen_pochhammer(b + l, m, d)
    if den == 0:
        raise PolePochhammer("Pochhammer denominator of gamma_mu vanishes")
    via_ratio = gen_pochhammer(a, m, d) * gen_pochhammer(b, m, d) / den
    if via_eta != via_ratio:
        raise ArithmeticError(f"gamma_mu closed forms disagree: {via_eta} vs {via_ratio}")
    return via_ratio


def inversion_constant(radon: RadonSpec) -> Fraction:
    """``c_{beta,l}(rho)``."""
    radon.check_inversion_conditions()
    val = c_sl(radon.d, radon.n, radon.r, radon.beta, (0,) * radon.r, int(radon.l))
    if val == 0:
        raise DegenerateConstant(f"c_(beta,l)(rho) vanishes for {radon}")
    return val


def inversion_eigenvalue(radon: RadonSpec, mu) -> Fraction:
    """Eigenvalue of ``S = C_{beta,l} / c_{beta,l}(rho)`` on ``V_mu``."""
    c0 = inversion_constant(radon)
    return c_sl(radon.d, radon.n, radon.r, radon.beta, _parts(mu), int(radon.l)) / c0


# -- Gindikin Gamma ratios --------------------------------------------------
def _gamma_a_ratio(top: Sequence[Fraction], bottom: Sequence[Fraction], d: int) -> Fraction:
    """``Gamma_A(top) / Gamma_A(bottom)`` for argument vectors with integer gaps.

    ``Gamma_A(x) = prod_j Gamma(x_j - d(j-1)/2)``; each factor ratio
    ``Gamma(a + k) / Gamma(a)`` becomes ``(a)_k`` (or its inverse for k < 0).
    """
    out = Fraction(1)
    for j, (x, y) in enumerate(zip(top, bottom)):
        gap = Fraction(x) - Fraction(y)
        if gap.denominator != 1:
            raise NonTelescoping(f"Gamma argument gap {gap} is not an integer")
        k = int(gap)
        a = Fraction(y) - Fraction(d * j, 2)
        if k >= 0:
            out *= pochhammer(a, k)
        else:
            den = pochhammer(a + k, -k)
            if den == 0:
                raise PolePochhammer("Gamma ratio has a pole")
            out /= den
    return out


@dataclass(frozen=True)
class GindikinReport:
    lhs: Fraction
    rhs: Fraction
    holds: bool
    power: int


def gindikin_identity_check(d: int, n: int, r: int, s, l: int, mu) -> GindikinReport:
    """Compare ``c_{s,l}(rho + mu)`` with
    ``(-1)^(lr) 2^(2lr) Gamma_A(s+l+m) Gamma_A(-s+dn/2+m) / (Gamma_A(s+m) Gamma_A(-s+dn/2-l+m))``.
    """
    if Fraction(l).denominator != 1 or l < 0:
        raise NonTelescoping(f"l = {l} must be a nonnegative integer")
    l = int(l)
    s = Fraction(s)
    m = _halves(mu)
    if len(m) != r:
        raise ValueError("mu must have length r")
    lhs = c_sl(d, n, r, s, _parts(mu), l)
    half = Fraction(d * n, 2)
    ratio = _gamma_a_ratio([s + l + x for x in m], [s + x for x in m], d)
    ratio *= _gamma_a_ratio([-s + half + x for x in m], [-s + half - l + x for x in m], d)
    sign = -1 if (l * r) % 2 else 1
    rhs = sign * Fraction(2) ** (2 * l * r) * ratio
    return GindikinReport(lhs, rhs, lhs == rhs, 2 * l * r)


@dataclass(frozen=True)
class GindikinSpecialization:
    constant: Fraction
    first_display: Fraction
    balancing_powers: tuple[int, ...]
    printed_second_display: Fraction
    second_display_is_reciprocal: bool


def gindikin_specialization(radon: RadonSpec) -> GindikinSpecialization:
    """``mu = 0, s = beta`` specialisation of the Gamma_A closed form.

    Reports which of ``2^(2lr)`` and ``2^(-2lr)`` makes the Gamma_A ratio equal
    to ``c_{beta,l}(rho)``, and how the printed form with
    ``Gamma_A(beta) Gamma_A(dr/2) / (Gamma_A(d(n-r)/2) Gamma_A(dr'/2))`` relates to it.
    """
    c0 = inversion_constant(radon)
    d, n, r = radon.d, radon.n, radon.r
    l = int(radon.l)
    b = radon.beta
    half = Fraction(d * n, 2)
    ratio = _gamma_a_ratio([b + l] * r, [b] * r, d) * _gamma_a_ratio([-b + half] * r, [-b + half - l] * r, d)
    sign = -1 if (l * r) % 2 else 1
    powers = tuple(k for k in (2 * l * r, -2 * l * r) if sign * Fraction(2) ** k * ratio == c0)
    printed_ratio = _gamma_a_ratio([b] * r, [Fraction(d * (n - r), 2)] * r, d) * _gamma_a_ratio(
        [Fraction(d * r, 2)] * r, [Fraction(d * radon.rprime, 2)] * r, d
    )
    printed = sign * Fraction(2) ** (-2 * l * r) * printed_ratio
    return GindikinSpecialization(c0, sign * Fraction(2) ** (2 * l * r) * ratio, powers, printed, printed * c0 == 1)


# -- grids ------------------------------------------------------------------
def partitions_up_to(r: int, total: int) -> list[tuple[int, ...]]:
    """Even partitions of length ``r`` with ``|mu| <= total``."""
    out = []

    def rec(prefix, remaining, cap):
        if len(prefix) == r:
            out.append(tuple(prefix))
            return
        for x in range(min(cap, remaining), -1, -2):
            if x % 2 == 0:
                rec(prefix + [x], remaining - x, x)

    rec([], total - total % 2, total - total % 2)
    out.sort(key=lambda p: (sum(p), p))
    return out


def radon_cases(n_max: int = 12) -> list[RadonSpec]:
    """All ``(d, n, r, r')`` with ``n <= n_max``, ``r <= r' <= n - r`` and integral ``l``."""
    out = []
    for d in (1, 2, 4):
        for n in range(2, n_max + 1):
            for r in range(1, n // 2 + 1):
                for rp in range(r, n - r + 1):
                    spec = RadonSpec(d, n, r, rp)
                    if spec.inversion_valid:
                        out.append(spec)
    return out


def gindikin_grid(count: int = 50, seed: int = 7) -> list[tuple]:
    """Reproducible ``(d, n, r, s, l, mu)`` cases for the Gamma_A closed form.

    The Gamma_A arguments differ by the integer l, so every ratio telescopes.
    """
    rng = random.Random(seed)
    shapes = [(d, n, r) for d in (1, 2, 4) for n in range(2, 9) for r in range(1, n // 2 + 1)]
    out = []
    while len(out) < count:
        d, n, r = shapes[rng.randrange(len(shapes))]
        l = rng.randint(0, 3)
        s = Fraction(rng.randint(-40, 40), rng.choice((1, 2, 3, 4)))
        mu = rng.choice(partitions_up_to(r, 8))
        out.append((d, n, r, s, l, mu))
    return out


def radial_eigenvalue(d: int, n: int, k: int) -> ParamPoly:
    """Rank-one eigenvalue on ``mu = (2k)`` from the Euclidean Laplacian alone.

    On ``F^n = R^N`` (N = dn), ``Psi = |x|^2`` and ``L`` is the Laplacian.  For
    ``h`` harmonic of degree 2k and ``a = -(s + k)``,
    ``Lap(|x|^(2a) h) = (2a(2a + N - 2) + 2 * 2a * 2k) |x|^(2a-2) h``
    by the product rule and Euler's identity, so
    ``C_{s,1}(|x|^(-2k) h) = that factor * |x|^(-2k) h``.
    """
    N = d * n
    a = ParamPoly.from_scalars([-k, -1])
    two_a = a * 2
    return two_a * (two_a + (N - 2)) + two_a * (2 * 2 * k)
