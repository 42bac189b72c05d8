"""Monte-Carlo geometry on Grassmannians over R, C and H.

Frames are stored in component form: an array of shape ``(..., n, r, d)``
holding the real components of each entry (the same layout as
:func:`capelli.jordan.complex_to_components`).  All linear algebra runs on the
complex form (``2n x 2r`` for quaternions).

Sampling is split into fixed-size chunks.  Chunk ``c`` of a sampler with
``(seed, stream)`` draws from ``SeedSequence(seed, spawn_key=(stream, c))``, so
results do not depend on how chunks are scheduled.  Chunk statistics are
merged in chunk order.
"""

from __future__ import annotations

import functools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .exactcore.poly import SparsePoly
from .exactcore.scalars import GaussRational, simplify_scalar
from .frames import CoordinateFrame
from .jordan import complex_to_components, components_to_complex
from .ktypes import (
    EvenPartition,
    RankViolation,
    build_equivariant_space,
    decompose,
    spherical_polynomial,
)
from .diffop import capelli_apply
from .spectra import RadonSpec, eta_mu, gamma_mu, inversion_constant, inversion_eigenvalue

__all__ = [
    "EstimatorDisagreement",
    "Frame",
    "HaarSampler",
    "MCEstimate",
    "SphericalFunction",
    "PolynomialFunction",
    "haar_unitary",
    "principal_sin",
    "x0_point",
    "y1_point",
    "eta0_point",
    "cached_decomposition",
    "spherical_function",
    "phi_at_y1_exact",
    "frame_coordinates",
    "radon_mc",
    "dual_radon_mc",
    "gamma_mc",
    "GammaReport",
    "sine_moment_mc",
    "square_identity_mc",
    "InversionReport",
    "inversion_check",
]

CHUNK = 1 << 15
ORTHO_TOL = 1e-10


class EstimatorDisagreement(AssertionError):
    pass


# -- frames -----------------------------------------------------------------
@dataclass(frozen=True)
class Frame:
    """An ``n x r`` matrix over F with orthonormal columns.

    ``data`` has shape ``(n, r, d)``; dtype float, or object holding exact
    rationals.
    """

    d: int
    data: np.ndarray

    def __post_init__(self):
        if self.data.ndim != 3 or self.data.shape[-1] != self.d:
            raise ValueError(f"frame data must have shape (n, r, {self.d})")

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def r(self) -> int:
        return self.data.shape[1]

    @property
    def exact(self) -> bool:
        return self.data.dtype == object

    def numeric(self) -> np.ndarray:
        return np.asarray(self.data, dtype=float)

    def complex(self) -> np.ndarray:
        return components_to_complex(self.numeric())

    def gram_error(self) -> float:
        c = self.complex()
        return float(np.abs(c.conj().T @ c - np.eye(c.shape[1])).max())

    def is_orthonormal(self) -> bool:
        if self.exact:
            return _exact_gram_is_identity(self)
        return self.gram_error() <= ORTHO_TOL

    def components(self) -> list[list[tuple]]:
        """Nested ``[i][j]`` lists of d-tuples, as taken by ``CoordinateFrame.point``."""
        return [[tuple(self.data[i, j]) for j in range(self.r)] for i in range(self.n)]


def _exact_gram_is_identity(fr: Frame) -> bool:
    from .jordan import AlgPolyMatrix, gram

    m = AlgPolyMatrix.from_numeric(fr.d, fr.components())
    g = gram(m).evaluate([])
    for i in range(fr.r):
        for j in range(fr.r):
            want = (1 if i == j else 0,) + (0,) * (fr.d - 1)
            if tuple(g[i][j]) != want:
                return False
    return True


def _unit_frame(d: int, n: int, cols: Sequence[int]) -> Frame:
    data = np.zeros((n, len(cols), d), dtype=object)
    data[...] = Fraction(0)
    for j, i in enumerate(cols):
        data[i, j, 0] = Fraction(1)
    return Frame(d, data)


def x0_point(d: int, n: int, r: int) -> Frame:
    """``[I_r; 0]``."""
    return _unit_frame(d, n, range(r))


def eta0_point(d: int, n: int, rprime: int) -> Frame:
    return _unit_frame(d, n, range(rprime))


def y1_point(d: int, n: int, r: int) -> Frame:
    """``[e_{r+1}, ..., e_{2r}]``: every principal angle to ``x0`` is a right angle."""
    if 2 * r > n:
        raise RankViolation(f"y1 needs 2r <= n, got n={n}, r={r}")
    return _unit_frame(d, n, range(r, 2 * r))


def _as_complex_batch(frames, d: int) -> np.ndarray:
    if isinstance(frames, Frame):
        return frames.complex()
    return components_to_complex(np.asarray(frames, dtype=float))


# -- Haar sampling ----------------------------------------------------------
def _haar_complex(rng: np.random.Generator, d: int, k: int, count: int) -> np.ndarray:
    """``count`` Haar elements of U(k, F) in complex form.

    QR of a Gaussian matrix, with the phases of diag(R) moved into Q.  For H
    the Gaussian matrix is embedded first; the normalized QR of a matrix in
    the embedding stays in the embedding, by uniqueness.
    """
    g = rng.standard_normal((count, k, k, d))
    a = g[..., 0] if d == 1 else components_to_complex(g)
    q, r = np.linalg.qr(a)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phase = diag / np.abs(diag)
    return q * phase[..., None, :]


def _complex_to_frames(c: np.ndarray, d: int) -> np.ndarray:
    return complex_to_components(c, d)


@dataclass(frozen=True)
class HaarSampler:
    """Reproducible Haar sampler on U(k, F) for a given ``(seed, stream)``."""

    d: int
    k: int
    seed: int = 0
    stream: int = 0

    def rng(self, chunk: int = 0) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(self.stream, chunk)))

    def sample(self, count: int, chunk: int = 0) -> np.ndarray:
        """Complex-form batch of shape ``(count, K, K)``; K is 2k for H."""
        return _haar_complex(self.rng(chunk), self.d, self.k, count)

    def with_stream(self, stream: int) -> "HaarSampler":
        return HaarSampler(self.d, self.k, self.seed, stream)


def haar_unitary(d: int, k: int, sampler: HaarSampler | None = None) -> np.ndarray:
    """One Haar element of U(k, F) in component form ``(k, k, d)``."""
    sampler = sampler or HaarSampler(d, k)
    return _complex_to_frames(sampler.sample(1)[0], d)


# -- principal angles -------------------------------------------------------
def principal_sin(y, y0) -> tuple[np.ndarray, np.ndarray]:
    """Sines of the principal angles between ``y`` and ``y0`` and their product.

    ``y`` may be a :class:`Frame` or a component batch ``(..., n, r, d)``.
    Returns ``(sines, |Sin|)`` with sines ascending along the last axis.
    """
    d = y0.d if isinstance(y0, Frame) else np.shape(y0)[-1]
    dy = y.d if isinstance(y, Frame) else np.shape(y)[-1]
    cy, c0 = _as_complex_batch(y, dy), _as_complex_batch(y0, d)
    if dy != d or cy.shape[-2:] != c0.shape[-2:]:
        raise ValueError(f"frame shapes differ: {cy.shape[-2:]} vs {c0.shape[-2:]}")
    sv = np.linalg.svd(np.swapaxes(c0.conj(), -1, -2) @ cy, compute_uv=False)
    if d == 4:
        # singular values of the embedding come in equal pairs
        sv = np.sort(sv, axis=-1)[..., ::2]
    cos = np.clip(sv, 0.0, 1.0)
    sines = np.sort(np.sqrt(1.0 - cos * cos), axis=-1)
    return sines, np.prod(sines, axis=-1)


def _sin_product(cy: np.ndarray, r: int, d: int) -> np.ndarray:
    """``|Sin|`` against ``x0`` for a complex-form batch: ``sqrt det(1 - A^dag A)``
    with ``A`` the top ``r`` rows."""
    rows = 2 * r if d == 4 else r
    top = cy[..., :rows, :]
    gram = np.eye(top.shape[-1]) - np.swapaxes(top.conj(), -1, -2) @ top
    det = np.real(np.linalg.det(gram))
    det = np.clip(det, 0.0, None)
    if d == 4:
        det = np.sqrt(det)
    return np.sqrt(det)


# -- evaluation of functions on frames --------------------------------------
def frame_coordinates(frame: CoordinateFrame, comps: np.ndarray) -> np.ndarray:
    """Batch of components ``(N, n, r, d)`` -> coordinates ``(N, nvars)``."""
    comps = np.asarray(comps, dtype=float)
    N = comps.shape[0]
    if frame.kind == "wirtinger":
        z = (comps[..., 0] + 1j * comps[..., 1]).reshape(N, -1)
        return np.concatenate([z, z.conj()], axis=1)
    return comps.reshape(N, -1)


class PolynomialFunction:
    """Vectorized evaluation of ``Psi^(-m) g`` on batches of frames."""

    def __init__(self, frame: CoordinateFrame, numerator: SparsePoly, psi_exponent=0):
        self.frame = frame
        self.numerator = numerator
        self.psi_exponent = Fraction(psi_exponent)
        self._num = _compile(numerator)
        self._psi = _compile(frame.psi) if psi_exponent else None

    def __call__(self, comps: np.ndarray) -> np.ndarray:
        x = frame_coordinates(self.frame, comps)
        val = _run(self._num, x)
        if self._psi is not None:
            val = val / np.real(_run(self._psi, x)) ** float(self.psi_exponent)
        return np.real(val)

    def exact(self, fr: Frame):
        pt = self.frame.point(fr.components())
        val = simplify_scalar(self.numerator.evaluate(pt))
        if self.psi_exponent:
            psi = simplify_scalar(self.frame.psi.evaluate(pt))
            if psi != 1:
                val = val / psi ** self.psi_exponent
        return val


def _compile(p: SparsePoly):
    terms = p.terms()
    if not terms:
        return (np.zeros((0, p.nvars), dtype=int), np.zeros(0, dtype=complex))
    exps = np.array(list(terms.keys()), dtype=int).reshape(len(terms), p.nvars)
    coeffs = np.array([_to_complex(c) for c in terms.values()], dtype=complex)
    return exps, coeffs


def _to_complex(c) -> complex:
    if isinstance(c, GaussRational):
        return complex(float(c.re), float(c.im))
    return complex(float(c))


def _run(compiled, x: np.ndarray) -> np.ndarray:
    exps, coeffs = compiled
    out = np.zeros(x.shape[0], dtype=complex)
    if not len(coeffs):
        return out
    top = int(exps.max(initial=0))
    powers = [np.ones_like(x, dtype=complex)]
    for _ in range(top):
        powers.append(powers[-1] * x)
    for e, c in zip(exps, coeffs):
        term = np.full(x.shape[0], c, dtype=complex)
        for v in np.nonzero(e)[0]:
            term = term * powers[e[v]][:, v]
        out += term
    return out


class SphericalFunction(PolynomialFunction):
    """The M-invariant ``phi_mu`` normalized by ``phi_mu(x0) = 1``."""

    def __init__(self, d: int, n: int, r: int, mu: Sequence[int], numerator: SparsePoly, frame: CoordinateFrame):
        self.d, self.n, self.r = d, n, r
        self.mu = tuple(mu)
        m = max(self.mu) // 2 if self.mu else 0
        super().__init__(frame, numerator, m)


@functools.lru_cache(maxsize=None)
def cached_decomposition(d: int, n: int, r: int, m: int):
    """K-type decomposition of ``P^m`` (p = 0), computed once per process."""
    return decompose(build_equivariant_space(d, n, r, m), method="auto")


@functools.lru_cache(maxsize=None)
def spherical_function(d: int, n: int, r: int, mu: tuple) -> SphericalFunction:
    """Build ``phi_mu`` exactly from the K-type decomposition of ``P^m``."""
    mu = tuple(int(x) for x in mu)
    EvenPartition(mu)
    m = max(mu) // 2
    if m == 0:
        space = build_equivariant_space(d, n, r, 0)
        g = space.combine({0: 1})
        g = g / simplify_scalar(g.evaluate(space.frame.x0()))
        return SphericalFunction(d, n, r, mu, g, space.frame)
    dec = cached_decomposition(d, n, r, m)
    return SphericalFunction(d, n, r, mu, spherical_polynomial(dec, mu), dec.space.frame)


def phi_at_y1_exact(phi: SphericalFunction) -> Fraction:
    """``phi_mu(y1)``; ``Psi(y1) = 1`` so this is the numerator at ``y1``."""
    val = phi.exact(y1_point(phi.d, phi.n, phi.r))
    if isinstance(val, GaussRational):
        if val.im:
            raise ArithmeticError(f"phi_mu(y1) is not real: {val}")
        val = val.re
    return Fraction(val)


# -- Monte-Carlo statistics -------------------------------------------------
@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    samples: int

    def zscore(self, exact) -> float:
        diff = self.mean - float(exact)
        if self.stderr == 0:
            return 0.0 if diff == 0 else math.copysign(math.inf, diff)
        return diff / self.stderr

    def agrees(self, exact, sigmas: float = 4.0) -> bool:
        return abs(self.zscore(exact)) <= sigmas

    def as_dict(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "samples": self.samples}


@dataclass
class _Moments:
    """Running count, mean and centred second moment (merged in a fixed order)."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def of(cls, x: np.ndarray) -> "_Moments":
        if not len(x):
            return cls()
        mean = float(np.sum(x) / len(x))
        dev = x - mean
        return cls(len(x), mean, float(np.sum(dev * dev)))

    def merge(self, other: "_Moments") -> "_Moments":
        if not other.count:
            return self
        if not self.count:
            return other
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / n
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / n
        return _Moments(n, mean, m2)

    def estimate(self) -> MCEstimate:
        if self.count < 2:
            return MCEstimate(self.mean, math.inf if self.count else math.nan, self.count)
        var = self.m2 / (self.count - 1)
        return MCEstimate(self.mean, math.sqrt(var / self.count), self.count)


def _chunks(total: int) -> list[tuple[int, int]]:
    out = []
    c = 0
    while total > 0:
        size = min(CHUNK, total)
        out.append((c, size))
        total -= size
        c += 1
    return out


def _map_chunks(task: Callable, args: list, workers: int) -> list:
    if workers <= 1 or len(args) <= 1:
        return [task(a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(task, args))


def _reduce(parts: list[_Moments]) -> MCEstimate:
    acc = _Moments()
    for p in parts:
        acc = acc.merge(p)
    return acc.estimate()


# -- Radon transforms -------------------------------------------------------
def _subframes_in(eta_c: np.ndarray, kc: np.ndarray, r: int, d: int) -> np.ndarray:
    """``eta * k[:, :r]`` in complex form for a batch of Haar ``k``."""
    cols = 2 * r if d == 4 else r
    return eta_c @ kc[..., :, :cols]


@dataclass(frozen=True)
class _RadonTask:
    f: Callable
    eta_c: np.ndarray
    d: int
    r: int
    sampler: HaarSampler

    def __call__(self, arg):
        chunk, size = arg
        kc = self.sampler.sample(size, chunk)
        y = _complex_to_frames(_subframes_in(self.eta_c, kc, self.r, self.d), self.d)
        return _Moments.of(np.asarray(self.f(y), dtype=float))


def radon_mc(f: Callable, target, r: int, samples: int, seed: int = 0, stream: int = 0, workers: int = 1) -> MCEstimate:
    """Estimate ``Rf(eta) = average of f(y) over r-planes y inside eta``.

    ``target`` is a :class:`Frame` of rank r' (orthonormal).  ``f`` maps a
    component batch ``(N, n, r, d)`` to ``N`` real values.
    """
    d, rp = target.d, target.r
    if r > rp:
        raise RankViolation(f"need r <= r', got r={r}, r'={rp}")
    task = _RadonTask(f, target.complex(), d, r, HaarSampler(d, rp, seed, stream))
    return _reduce(_map_chunks(task, _chunks(samples), workers))


@dataclass(frozen=True)
class _DualTask:
    f: Callable
    y_c: np.ndarray
    d: int
    n: int
    r: int
    rprime: int
    seed: int
    stream: int

    def __call__(self, arg):
        chunk, size = arg
        rng = np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(self.stream, chunk)))
        d, n, r = self.d, self.n, self.r
        g = rng.standard_normal((size, n, n - r, d))
        gc = g[..., 0] if d == 1 else components_to_complex(g)
        a = np.concatenate([np.broadcast_to(self.y_c, (size,) + self.y_c.shape), gc], axis=-1)
        q, rr = np.linalg.qr(a)
        diag = np.diagonal(rr, axis1=-2, axis2=-1)
        q = q * (diag / np.abs(diag))[..., None, :]
        cols = 2 * self.rprime if d == 4 else self.rprime
        eta = _complex_to_frames(q[..., :, :cols], d)
        return _Moments.of(np.asarray(self.f(eta), dtype=float))


def dual_radon_mc(F: Callable, y: Frame, rprime: int, samples: int, seed: int = 0, stream: int = 0, workers: int = 1) -> MCEstimate:
    """Estimate ``R'F(y) = average of F(eta) over r'-planes eta containing y``.

    ``eta = [y, w]`` with ``w`` a Haar-random frame of the orthogonal
    complement, obtained from the normalized QR of ``[y, G]`` with G Gaussian.
    """
    n, r = y.n, y.r
    if not r <= rprime <= n:
        raise RankViolation(f"need r <= r' <= n, got r={r}, r'={rprime}, n={n}")
    task = _DualTask(F, y.complex(), y.d, n, r, rprime, seed, stream)
    return _reduce(_map_chunks(task, _chunks(samples), workers))


# -- gamma_mu and friends ---------------------------------------------------
@dataclass(frozen=True)
class _GammaTask:
    f: Callable
    d: int
    n: int
    r: int
    rprime: int
    sampler: HaarSampler

    def __call__(self, arg):
        chunk, size = arg
        kc = self.sampler.sample(size, chunk)
        y = _pad_rows(kc, self.d, self.n, self.r)
        return _Moments.of(np.asarray(self.f(y), dtype=float))


def _pad_rows(kc: np.ndarray, d: int, n: int, r: int) -> np.ndarray:
    """First r columns of ``k`` in U(r', F), padded with zero rows to length n."""
    cols = 2 * r if d == 4 else r
    sub = _complex_to_frames(kc[..., :, :cols], d)
    out = np.zeros(sub.shape[:-3] + (n, r, d))
    out[..., : sub.shape[-3], :, :] = sub
    return out


@dataclass(frozen=True)
class _SineTask:
    f: Callable
    d: int
    n: int
    r: int
    sampler: HaarSampler
    power: float

    def __call__(self, arg):
        chunk, size = arg
        kc = self.sampler.sample(size, chunk)
        cols = 2 * self.r if self.d == 4 else self.r
        yc = kc[..., :, :cols]
        w = _sin_product(yc, self.r, self.d) ** self.power
        fx = np.asarray(self.f(_complex_to_frames(yc, self.d)), dtype=float)
        return _RatioSums.of(w, fx)


@dataclass
class _RatioSums:
    count: int = 0
    sw: float = 0.0
    swf: float = 0.0
    sww: float = 0.0
    swwf: float = 0.0
    swwff: float = 0.0

    @classmethod
    def of(cls, w: np.ndarray, fx: np.ndarray) -> "_RatioSums":
        ww = w * w
        return cls(len(w), float(np.sum(w)), float(np.sum(w * fx)), float(np.sum(ww)),
                   float(np.sum(ww * fx)), float(np.sum(ww * fx * fx)))

    def merge(self, o: "_RatioSums") -> "_RatioSums":
        return _RatioSums(self.count + o.count, self.sw + o.sw, self.swf + o.swf, self.sww + o.sww,
                          self.swwf + o.swwf, self.swwff + o.swwff)

    def estimate(self) -> MCEstimate:
        ratio = self.swf / self.sw
        # delta method: sum w^2 (f - ratio)^2 / (sum w)^2
        resid = self.swwff - 2 * ratio * self.swwf + ratio * ratio * self.sww
        return MCEstimate(ratio, math.sqrt(max(resid, 0.0)) / self.sw, self.count)


def _ratio_mc(f: Callable, d: int, n: int, r: int, power: float, samples: int, seed: int, stream: int, workers: int) -> MCEstimate:
    task = _SineTask(f, d, n, r, HaarSampler(d, n, seed, stream), power)
    acc = _RatioSums()
    for part in _map_chunks(task, _chunks(samples), workers):
        acc = acc.merge(part)
    return acc.estimate()


@dataclass
class GammaReport:
    mu: tuple
    exact: Fraction
    estimate: MCEstimate
    sine_estimate: MCEstimate | None = None

    @property
    def ok(self) -> bool:
        good = self.estimate.agrees(self.exact)
        if self.sine_estimate is not None:
            good = good and self.sine_estimate.agrees(self.exact)
        return good


def gamma_mc(mu: Sequence[int], radon: RadonSpec, samples: int, seed: int = 0, stream: int = 0,
             sine_weighted: bool = False, workers: int = 1, phi: Callable | None = None) -> GammaReport:
    """Estimate ``gamma_mu = (R'R phi_mu)(x0) = R phi_mu(eta0)``.

    The default estimator averages ``phi_mu`` over r-frames inside
    ``eta0 = F^{r'}``.  With ``sine_weighted`` a second estimator averages
    over all of Y with weights ``|Sin y|^(-2 beta)`` (needs ``2r <= r'``);
    the two must agree within 5 combined standard errors.
    """
    mu = tuple(int(x) for x in mu)
    d, n, r, rp = radon.d, radon.n, radon.r, radon.rprime
    exact = gamma_mu(radon, mu)
    if phi is None:
        phi = spherical_function(d, n, r, mu)
    if not any(mu):
        return GammaReport(mu, exact, MCEstimate(1.0, 0.0, samples))
    task = _GammaTask(phi, d, n, r, rp, HaarSampler(d, rp, seed, stream))
    est = _reduce(_map_chunks(task, _chunks(samples), workers))
    sine = None
    if sine_weighted:
        if 2 * r > rp:
            raise ValueError("the sine-weighted estimator needs 2r <= r'")
        sine = _ratio_mc(phi, d, n, r, -2 * float(radon.beta), samples, seed, stream + 1, workers)
        se = math.hypot(est.stderr, sine.stderr)
        if abs(est.mean - sine.mean) > 5 * se:
            raise EstimatorDisagreement(
                f"gamma estimators differ: {est.mean:.6g} vs {sine.mean:.6g} (combined se {se:.3g})")
    return GammaReport(mu, exact, est, sine)


def sine_moment_mc(mu: Sequence[int], d: int, n: int, r: int, nu, samples: int, seed: int = 0, stream: int = 0,
                   workers: int = 1) -> tuple[MCEstimate, Fraction]:
    """Estimate ``E[|Sin|^(2 nu) phi_mu] / E[|Sin|^(2 nu)]`` over Haar-random y.

    Returns the estimate and the exact ``eta_mu(nu) phi_mu(y1)``.
    """
    phi = spherical_function(d, n, r, tuple(mu))
    exact = eta_mu(nu, mu, d, n) * phi_at_y1_exact(phi)
    est = _ratio_mc(phi, d, n, r, 2 * float(nu), samples, seed, stream, workers)
    return est, exact


def square_identity_mc(mu: Sequence[int], d: int, n: int, r: int, samples: int, seed: int = 0,
                       stream: int = 0, workers: int = 1) -> tuple[MCEstimate, Fraction]:
    """Estimate ``R_{r,n-r} R_{n-r,r} phi_mu (x0)``; returns it with exact ``phi_mu(y1)^2``."""
    if 3 * r > n:
        raise RankViolation(f"the square identity is checked for r <= n/3, got n={n}, r={r}")
    phi = spherical_function(d, n, r, tuple(mu))
    rep = gamma_mc(mu, RadonSpec(d, n, r, n - r), samples, seed, stream, phi=phi, workers=workers)
    return rep.estimate, phi_at_y1_exact(phi) ** 2


# -- inversion --------------------------------------------------------------
@dataclass
class InversionReport:
    radon: RadonSpec
    m: int
    coefficients: dict
    exact_terms: dict
    target: Fraction
    estimate: MCEstimate
    exact_ok: bool
    notes: list = field(default_factory=list)

    @property
    def mc_ok(self) -> bool:
        return self.estimate.agrees(self.target)

    @property
    def ok(self) -> bool:
        return self.exact_ok and self.mc_ok


def random_coefficients(types: Sequence, seed: int) -> dict:
    rng = random.Random(seed)
    out = {}
    for mu in types:
        out[tuple(mu)] = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5))
    return out


def inversion_check(radon: RadonSpec, m: int, samples: int, seed: int = 0, stream: int = 0,
                    coefficients: dict | None = None, workers: int = 1) -> InversionReport:
    """End-to-end check of ``S R' R = I`` on a mixture ``f = sum a_mu phi_mu``.

    ``g = S f`` is computed exactly: ``S = Psi^(beta+l) L^l Psi^(-beta) / c_{beta,l}(rho)``
    applied to ``Psi^(-m) sum a_mu g_mu``.  Then ``(R'R g)(x0)`` is estimated
    and compared with ``f(x0) = sum a_mu``.  The exact spectral route
    ``a_mu * eigenvalue(S) * gamma_mu = a_mu`` is checked for every term.
    """
    radon.check_inversion_conditions()
    d, n, r = radon.d, radon.n, radon.r
    l = int(radon.l)
    types = [mu.parts for mu in build_equivariant_space(d, n, r, m).types]
    if coefficients is None:
        coefficients = random_coefficients(types, seed)
    coefficients = {tuple(k): Fraction(v) for k, v in coefficients.items()}
    exact_terms = {}
    exact_ok = True
    for mu, a in coefficients.items():
        val = a * inversion_eigenvalue(radon, mu) * gamma_mu(radon, mu)
        exact_terms[mu] = val
        exact_ok = exact_ok and val == a
    target = sum(coefficients.values(), Fraction(0))

    frame = None
    numer = None
    for mu, a in coefficients.items():
        phi = spherical_function(d, n, r, mu)
        frame = phi.frame
        # lift phi_mu = Psi^(-m_mu) g_mu to a common Psi^(-m) by multiplying by Psi^(m - m_mu)
        g = phi.numerator * (frame.psi ** int(m - phi.psi_exponent)) if m != phi.psi_exponent else phi.numerator
        numer = g * a if numer is None else numer + g * a
    res = capelli_apply(frame, l, m, numer)
    sf = res.at(radon.beta) * (1 / inversion_constant(radon))
    g_fun = PolynomialFunction(frame, sf, Fraction(m) + res.exponent)
    task = _GammaTask(g_fun, d, n, r, radon.rprime, HaarSampler(d, radon.rprime, seed, stream))
    est = _reduce(_map_chunks(task, _chunks(samples), workers))
    return InversionReport(radon, m, coefficients, exact_terms, target, est, exact_ok)
