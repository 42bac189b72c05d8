"""Batch verification driver.

    capelli verify capelli --d 1 --n 3 --r 1 --m 0..3 --l 1,2
    capelli verify radon-mc --seed 7 --samples 1000000 --format json
    capelli tables --table gamma --n 2..6 --format csv --out tables/

Each ``verify`` suite checks one family of identities over a parameter grid
and exits 0 when every case passes, 1 on any failed identity and 2 on an
invalid configuration.  Reports are deterministic functions of the run
configuration; wall-clock timings are only included with ``--timings``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import sys
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

import click

from .diffop import operator_matrix
from .ktypes import (
    EvenPartition,
    LargeCaseDisabled,
    RankViolation,
    build_equivariant_space,
    decompose,
    spherical_polynomial,
    verify_eigenbasis,
)
from .exactcore.matrix import exact_matmul, to_object
from .spectra import (
    RadonSpec,
    c_sl,
    eta_mu,
    gamma_mu,
    gen_pochhammer,
    gindikin_grid,
    gindikin_identity_check,
    gindikin_specialization,
    inversion_constant,
    inversion_eigenvalue,
    line_bundle_eigenvalue,
    partitions_up_to,
    radial_eigenvalue,
    radon_cases,
)

FORMATS = ("markdown", "csv", "json")


class ConfigError(click.UsageError):
    """Invalid grid; click maps it to exit status 2."""


# -- configuration -----------------------------------------------------------
@dataclass(frozen=True)
class RunConfig:
    suite: str
    d: tuple | None = None
    n: tuple | None = None
    r: tuple | None = None
    rprime: tuple | None = None
    m: tuple | None = None
    l: tuple | None = None
    p: tuple | None = None
    s: tuple | None = None
    mu: tuple | None = None
    mu_max: int | None = None
    seed: int = 0
    samples: int = 100_000
    format: str = "markdown"
    large: bool = False
    timings: bool = False
    max_rel_se: float | None = None

    def grid_given(self) -> bool:
        return any(getattr(self, k) is not None for k in ("d", "n", "r", "rprime", "m", "l", "p", "s", "mu"))

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"), default=list)


@dataclass
class CaseResult:
    key: tuple
    fields: dict
    passed: bool
    message: str = ""
    seconds: float | None = None


@dataclass(frozen=True)
class Suite:
    name: str
    criterion: int
    anchor: str
    cases: Callable[[RunConfig], list]
    run: Callable[[tuple, RunConfig], CaseResult]
    notes: tuple = ()


SUITES: dict[str, Suite] = {}


def register(name: str, criterion: int, anchor: str, notes: tuple = ()):
    def wrap(pair):
        cases, run = pair
        SUITES[name] = Suite(name, criterion, anchor, cases, run, notes)
        return pair

    return wrap


# -- helpers -------------------------------------------------------------------
def fmt_q(x) -> str:
    return str(Fraction(x))


def fmt_f(x: float) -> str:
    return format(x, ".12g")


def fmt_mu(mu) -> str:
    return "(" + ",".join(str(int(x)) for x in mu) + ")"


def _pick(value, default):
    return tuple(value) if value is not None else tuple(default)


def _stream(key: tuple) -> int:
    return zlib.crc32(repr(key).encode())


def _check_rank(d: int, n: int, r: int):
    if d not in (1, 2, 4):
        raise ConfigError(f"d must be 1, 2 or 4, got {d}")
    if not 1 <= r <= n - r:
        raise ConfigError(f"rank condition 1 <= r <= n - r fails for n={n}, r={r}")


def _check_radon(d: int, n: int, r: int, rp: int, need_integral_l: bool = True) -> RadonSpec:
    _check_rank(d, n, r)
    if not r <= rp <= n - r:
        raise ConfigError(f"condition (i) r <= r' <= n - r fails for n={n}, r={r}, r'={rp}")
    spec = RadonSpec(d, n, r, rp)
    if need_integral_l and not spec.condition_ii:
        raise ConfigError(f"condition (ii) fails: l = d(r'-r)/2 = {spec.l} is not an integer (d={d}, r={r}, r'={rp})")
    return spec


def _ints_mu(text_mu) -> list[tuple]:
    out = []
    for mu in text_mu:
        try:
            EvenPartition(mu)
        except ValueError as exc:
            raise ConfigError(f"bad mu {fmt_mu(mu)}: {exc}") from None
        out.append(tuple(mu))
    return out


def _failure(anchor: str, text: str) -> str:
    return f"{text} [identity: {anchor}]"


# -- criterion 1: Capelli spectrum ---------------------------------------------
CAPELLI_DEFAULT = (
    [(1, n, 1, m) for n in range(3, 6) for m in range(0, 4)]
    + [(1, n, 2, 1) for n in (4, 5)]
    + [(2, n, 1, m) for n in range(2, 5) for m in range(0, 3)]
    + [(2, 4, 2, 1)]
    + [(4, n, 1, m) for n in (2, 3) for m in range(0, 3)]
)

CAPELLI_ANCHOR = "Capelli spectrum: prod over mu in Lambda^m of (B_l(s) - q_l(2s - rho_1, mu + rho) I) = 0"
CONVENTION_NOTES = (
    "spectral parameter convention: eigenvalue q_l(2s - rho_1 - p, mu + rho)",
    "kappa = 1: d(p) uses orthonormal real coordinates (Wirtinger form d/dz = 2 d/dzbar pairing for F = C)",
)


def _capelli_cases(cfg: RunConfig) -> list:
    if not cfg.grid_given():
        return [c + (l,) for c in CAPELLI_DEFAULT for l in (1, 2)]
    out = []
    for d in _pick(cfg.d, (1,)):
        for n in _pick(cfg.n, (3,)):
            for r in _pick(cfg.r, (1,)):
                _check_rank(d, n, r)
                for m in _pick(cfg.m, (1,)):
                    for l in _pick(cfg.l, (1, 2)):
                        if m < 0 or l < 1:
                            raise ConfigError(f"need m >= 0 and l >= 1, got m={m}, l={l}")
                        out.append((d, n, r, m, l))
    return out


def _spectrum_fields(space, B, dec, l: int, p: int = 0) -> tuple[dict, list[str]]:
    """Shared checks: eigenbasis, leading coefficient, Weyl dimensions."""
    problems = verify_eigenbasis(dec, B, l)
    r = space.r
    lead_deg = 2 * r * l
    dim = space.dim
    if dim:
        if B.s_degree() != lead_deg:
            problems.append(f"s-degree of B is {B.s_degree()}, expected {lead_deg}")
        else:
            lead = B.coefficient_matrix(lead_deg)
            want = 2 ** lead_deg
            if any(lead[i][j] != (want if i == j else 0) for i in range(dim) for j in range(dim)):
                problems.append(f"leading coefficient of B is not 2^{lead_deg} I")
    eig = "; ".join(f"{fmt_mu(b.mu.parts)}: {b.eigenvalue.to_str()}" for b in dec.blocks)
    dims = "; ".join(f"{fmt_mu(b.mu.parts)}: {b.dim}={b.weyl_dim}" for b in dec.blocks)
    return {"dim": str(dim), "eigenvalues": eig, "weyl_dims": dims}, problems


def _vanishing_set(space, B, dec, m: int) -> tuple[set, set]:
    """(mu with B(-m) zero on V_mu, mu with predicted eigenvalue zero at s = -m)."""
    Bm = to_object(B.at(-m))
    zero, pred = set(), set()
    for blk in dec.blocks:
        V = to_object([[v.get(i, 0) for v in blk.vectors] for i in range(space.dim)])
        if all(x == 0 for x in exact_matmul(Bm, V).flat):
            zero.add(blk.mu.parts)
        if blk.eigenvalue.eval_scalar(-m) == 0:
            pred.add(blk.mu.parts)
    return zero, pred


def _capelli_run(case: tuple, cfg: RunConfig) -> CaseResult:
    d, n, r, m, l = case
    space = build_equivariant_space(d, n, r, m, large=cfg.large)
    B = operator_matrix(space, l, method="auto")
    dec = decompose(space, B)
    fields, problems = _spectrum_fields(space, B, dec, l)
    zero, pred = _vanishing_set(space, B, dec, m)
    top = {mu.parts for mu in space.types if mu.parts[0] == 2 * m}
    if zero != pred:
        problems.append(f"B(-m) vanishes on {sorted(zero)} but the predicted eigenvalues vanish on {sorted(pred)}")
    if l == 1 and zero != top:
        problems.append(f"B_1(-m) vanishes on {sorted(zero)}, expected exactly {{mu_1 = 2m}} = {sorted(top)}")
    if not top <= zero:
        problems.append(f"B(-m) does not vanish on {sorted(top - zero)}")
    fields = {"d": str(d), "n": str(n), "r": str(r), "m": str(m), "l": str(l), "method": B.method, **fields,
              "zero_at_s=-m": " ".join(fmt_mu(mu) for mu in sorted(zero))}
    return CaseResult(case, fields, not problems, _failure(CAPELLI_ANCHOR, "; ".join(problems)) if problems else "")


register("capelli", 1, CAPELLI_ANCHOR, CONVENTION_NOTES)((_capelli_cases, _capelli_run))


# -- criterion 8: line bundles ------------------------------------------------
LINE_ANCHOR = "line-bundle spectrum: eigenvalue q_l(2s - rho_1 - p, mu + rho) for mu in Lambda_|p|^m"


def _line_cases(cfg: RunConfig) -> list:
    out = []
    for d in _pick(cfg.d, (2,)):
        for n in _pick(cfg.n, (3,)):
            for r in _pick(cfg.r, (1,)):
                _check_rank(d, n, r)
                if d != 2:
                    raise ConfigError("line bundles need F = C (d = 2)")
                for m in _pick(cfg.m, (1,)):
                    for p in _pick(cfg.p, (-2, -1, 1, 2)):
                        for l in _pick(cfg.l, (1,)):
                            out.append((d, n, r, m, p, l))
    return out


def _line_run(case: tuple, cfg: RunConfig) -> CaseResult:
    d, n, r, m, p, l = case
    space = build_equivariant_space(d, n, r, m, p)
    B = operator_matrix(space, l, method="auto")
    dec = decompose(space, B)
    fields, problems = _spectrum_fields(space, B, dec, l, p)
    for blk in dec.blocks:
        other = line_bundle_eigenvalue(d, n, r, None, p, blk.mu.parts, l)
        if other.scalar_coeffs() != blk.eigenvalue.scalar_coeffs():
            problems.append(f"mu={fmt_mu(blk.mu.parts)}: {blk.eigenvalue.to_str()} != {other.to_str()}")
    fields = {"d": str(d), "n": str(n), "r": str(r), "m": str(m), "p": str(p), "l": str(l), **fields}
    return CaseResult(case, fields, not problems, _failure(LINE_ANCHOR, "; ".join(problems)) if problems else "")


register("line-bundle", 8, LINE_ANCHOR, CONVENTION_NOTES)((_line_cases, _line_run))


# -- criterion 2: rank one ----------------------------------------------------
RANK1_ANCHOR = "rank-one closed form c_{s,1}((2k) + rho) = (2s + 2k)(2s - 2k - dn + 2)"


def _rank1_cases(cfg: RunConfig) -> list:
    out = []
    for d in _pick(cfg.d, (1, 2, 4)):
        if d not in (1, 2, 4):
            raise ConfigError(f"d must be 1, 2 or 4, got {d}")
        for n in _pick(cfg.n, range(2, 9)):
            if n < 2:
                raise ConfigError("rank one needs n >= 2")
            for k in _pick(cfg.m, range(0, 6)):
                out.append((d, n, k))
    return out


def _rank1_run(case: tuple, cfg: RunConfig) -> CaseResult:
    d, n, k = case
    ev = c_sl(d, n, 1, None, (2 * k,), 1)
    oracle = radial_eigenvalue(d, n, k)
    ok = ev.scalar_coeffs() == oracle.scalar_coeffs()
    fields = {"d": str(d), "n": str(n), "mu": fmt_mu((2 * k,)), "c_s1": ev.to_str(), "radial": oracle.to_str()}
    msg = "" if ok else _failure(RANK1_ANCHOR, f"{ev.to_str()} != {oracle.to_str()}")
    return CaseResult(case, fields, ok, msg)


register("rank-one", 2, RANK1_ANCHOR)((_rank1_cases, _rank1_run))


# -- criterion 3: exact Radon identities ------------------------------------
RADON_ANCHOR = (
    "gamma_mu c_{beta,l}(mu + rho) = c_{beta,l}(rho) and "
    "eta_mu(-alpha) eta_mu(-beta) = (alpha)_m (beta)_m / ((alpha + l)_m (beta + l)_m)"
)


def _radon_exact_cases(cfg: RunConfig) -> list:
    if not cfg.grid_given():
        return [(s.d, s.n, s.r, s.rprime) for s in radon_cases(12)]
    out = []
    for d in _pick(cfg.d, (1, 2, 4)):
        for n in _pick(cfg.n, range(2, 13)):
            rs = cfg.r if cfg.r is not None else range(1, n // 2 + 1)
            for r in rs:
                if cfg.r is not None:
                    _check_rank(d, n, r)
                rps = cfg.rprime if cfg.rprime is not None else range(r, n - r + 1)
                for rp in rps:
                    if cfg.rprime is not None or cfg.r is not None:
                        _check_radon(d, n, r, rp)
                    elif not RadonSpec(d, n, r, rp).condition_ii:
                        continue
                    out.append((d, n, r, rp))
    return out


def _radon_exact_run(case: tuple, cfg: RunConfig) -> CaseResult:
    spec = RadonSpec(*case)
    l = int(spec.l)
    total = 10 if cfg.mu_max is None else cfg.mu_max
    c0 = inversion_constant(spec)
    problems = []
    count = 0
    for mu in partitions_up_to(spec.r, total):
        count += 1
        m = EvenPartition(mu).m
        g = gamma_mu(spec, mu)
        c = c_sl(spec.d, spec.n, spec.r, spec.beta, mu, l)
        if g * c != c0:
            problems.append(f"mu={fmt_mu(mu)}: gamma*c = {fmt_q(g * c)} vs c(rho) = {fmt_q(c0)}")
        a, b = spec.alpha, spec.beta
        lhs = eta_mu(-a, mu, spec.d, spec.n) * eta_mu(-b, mu, spec.d, spec.n)
        rhs = gen_pochhammer(a, m, spec.d) * gen_pochhammer(b, m, spec.d) / (
            gen_pochhammer(a + l, m, spec.d) * gen_pochhammer(b + l, m, spec.d))
        if lhs != rhs:
            problems.append(f"mu={fmt_mu(mu)}: eta product {fmt_q(lhs)} vs Pochhammer form {fmt_q(rhs)}")
    fields = {"d": str(spec.d), "n": str(spec.n), "r": str(spec.r), "rprime": str(spec.rprime), "l": str(l),
              "c_beta_l_rho": fmt_q(c0), "mu_checked": str(count)}
    return CaseResult(case, fields, not problems, _failure(RADON_ANCHOR, "; ".join(problems[:5])) if problems else "")


register("radon-exact", 3, RADON_ANCHOR)((_radon_exact_cases, _radon_exact_run))


# -- criterion 4: Gindikin closed form ---------------------------------------
GINDIKIN_ANCHOR = (
    "c_{s,l}(rho + mu) = (-1)^(lr) 2^(2lr) Gamma_A(s+l+m) Gamma_A(-s+dn/2+m) / "
    "(Gamma_A(s+m) Gamma_A(-s+dn/2-l+m)); at mu = 0, s = beta it equals c_{beta,l}(rho)"
)


def _gindikin_cases(cfg: RunConfig) -> list:
    if not cfg.grid_given():
        cases = [("grid",) + c for c in gindikin_grid()]
        specs = [("radon", s.d, s.n, s.r, s.rprime) for s in radon_cases(8)]
        return cases + specs
    out = []
    for d in _pick(cfg.d, (1,)):
        for n in _pick(cfg.n, (4,)):
            for r in _pick(cfg.r, (1,)):
                _check_rank(d, n, r)
                for l in _pick(cfg.l, (1,)):
                    for s in _pick(cfg.s, (Fraction(1, 3),)):
                        for mu in partitions_up_to(r, 4 if cfg.mu_max is None else cfg.mu_max):
                            out.append(("grid", d, n, r, Fraction(s), l, mu))
    return out


def _gindikin_run(case: tuple, cfg: RunConfig) -> CaseResult:
    if case[0] == "grid":
        _, d, n, r, s, l, mu = case
        rep = gindikin_identity_check(d, n, r, s, l, mu)
        fields = {"kind": "closed form", "d": str(d), "n": str(n), "r": str(r), "s": fmt_q(s), "l": str(l),
                  "mu": fmt_mu(mu), "lhs": fmt_q(rep.lhs), "rhs": fmt_q(rep.rhs)}
        msg = "" if rep.holds else _failure(GINDIKIN_ANCHOR, f"{fmt_q(rep.lhs)} != {fmt_q(rep.rhs)}")
        return CaseResult(case, fields, rep.holds, msg)
    _, d, n, r, rp = case
    spec = RadonSpec(d, n, r, rp)
    sp = gindikin_specialization(spec)
    ok = sp.first_display == sp.constant
    fields = {"kind": "specialization", "d": str(d), "n": str(n), "r": str(r), "s": fmt_q(spec.beta),
              "l": str(int(spec.l)), "mu": fmt_mu((0,) * r), "lhs": fmt_q(sp.constant), "rhs": fmt_q(sp.first_display)}
    msg = "" if ok else _failure(GINDIKIN_ANCHOR, f"{fmt_q(sp.constant)} != {fmt_q(sp.first_display)}")
    return CaseResult(case, fields, ok, msg)


register("gindikin", 4, GINDIKIN_ANCHOR)((_gindikin_cases, _gindikin_run))


# -- criterion 5: special value ------------------------------------------------
SPECIAL_ANCHOR = "phi_mu(y1) = eta_mu(-alpha) and gamma_mu = eta_mu(-beta) phi_mu(y1)"


def _special_cases(cfg: RunConfig) -> list:
    if not cfg.grid_given():
        best: dict = {}
        for d, n, r, m in CAPELLI_DEFAULT:
            if 2 * r <= n:
                best[(d, n, r)] = max(m, best.get((d, n, r), 0))
        return [k + (m,) for k, m in sorted(best.items()) if m > 0]
    out = []
    for d in _pick(cfg.d, (1,)):
        for n in _pick(cfg.n, (3,)):
            for r in _pick(cfg.r, (1,)):
                _check_rank(d, n, r)
                for m in _pick(cfg.m, (2,)):
                    out.append((d, n, r, m))
    return out


def _special_run(case: tuple, cfg: RunConfig) -> CaseResult:
    from .radon import SphericalFunction, cached_decomposition, phi_at_y1_exact

    d, n, r, m = case
    if d == 4 and r >= 2 and not cfg.large:
        raise LargeCaseDisabled("quaternionic rank >= 2 spaces need --large")
    dec = cached_decomposition(d, n, r, m)
    alpha = Fraction(d * r, 2)
    problems = []
    values = []
    for blk in dec.blocks:
        mu = blk.mu.parts
        phi = SphericalFunction(d, n, r, mu, spherical_polynomial(dec, mu), dec.space.frame)
        v = phi_at_y1_exact(phi)
        e = eta_mu(-alpha, mu, d, n)
        values.append(f"{fmt_mu(mu)}: {fmt_q(v)}")
        if v != e:
            problems.append(f"mu={fmt_mu(mu)}: phi(y1) = {fmt_q(v)} vs eta(-alpha) = {fmt_q(e)}")
        for rp in range(r, n - r + 1):
            spec = RadonSpec(d, n, r, rp)
            g = gamma_mu(spec, mu)
            rhs = eta_mu(-spec.beta, mu, d, n) * v
            if g != rhs:
                problems.append(f"mu={fmt_mu(mu)}, r'={rp}: gamma = {fmt_q(g)} vs eta(-beta) phi(y1) = {fmt_q(rhs)}")
    fields = {"d": str(d), "n": str(n), "r": str(r), "m": str(m), "phi_y1": "; ".join(values)}
    return CaseResult(case, fields, not problems, _failure(SPECIAL_ANCHOR, "; ".join(problems)) if problems else "")


register("special-value", 5, SPECIAL_ANCHOR)((_special_cases, _special_run))


# -- criterion 6: Monte-Carlo gamma ------------------------------------------
MC_ANCHOR = "(R'R phi_mu)(y0) = gamma_mu = eta_mu(-alpha) eta_mu(-beta)"
MC_DEFAULT = [
    (2, 3, 1, 2, (2,)), (2, 3, 1, 2, (4,)),
    (1, 4, 1, 3, (2,)), (1, 4, 1, 3, (4,)),
    (4, 3, 1, 2, (2,)),
]
MC_NOTES = (
    "sampling: chunks of 32768 from SeedSequence(seed, spawn_key=(stream, chunk)); stream = crc32 of the case key",
    "pass: |estimate - exact| <= 4 standard errors",
)


def _mc_grid(cfg: RunConfig, default: list, tail: Callable) -> list:
    if not cfg.grid_given():
        return list(default)
    out = []
    for d in _pick(cfg.d, (2,)):
        for n in _pick(cfg.n, (3,)):
            for r in _pick(cfg.r, (1,)):
                for rp in _pick(cfg.rprime, (r + 1,)):
                    _check_radon(d, n, r, rp)
                    out.extend((d, n, r, rp, t) for t in tail(r))
    return out


def _mc_cases(cfg: RunConfig) -> list:
    def mus(r):
        return _ints_mu(cfg.mu) if cfg.mu else [(2,) + (0,) * (r - 1)]

    cases = _mc_grid(cfg, MC_DEFAULT, mus)
    for c in cases:
        if len(c[4]) != c[2]:
            raise ConfigError(f"mu={fmt_mu(c[4])} must have length r={c[2]}")
    return cases


def _mc_run(case: tuple, cfg: RunConfig) -> CaseResult:
    from .radon import gamma_mc

    d, n, r, rp, mu = case
    rep = gamma_mc(mu, RadonSpec(d, n, r, rp), cfg.samples, seed=cfg.seed, stream=_stream(case))
    est = rep.estimate
    rel = est.stderr / abs(float(rep.exact)) if rep.exact else float("inf")
    z = est.zscore(rep.exact)
    ok = abs(z) <= 4
    problems = [] if ok else [f"estimate {fmt_f(est.mean)} vs exact {fmt_q(rep.exact)} ({fmt_f(z)} standard errors)"]
    if cfg.max_rel_se is not None and rel > cfg.max_rel_se:
        ok = False
        problems.append(f"relative standard error {fmt_f(rel)} exceeds {fmt_f(cfg.max_rel_se)}")
    fields = {"d": str(d), "n": str(n), "r": str(r), "rprime": str(rp), "mu": fmt_mu(mu),
              "exact": fmt_q(rep.exact), "estimate": fmt_f(est.mean), "stderr": fmt_f(est.stderr),
              "rel_se": fmt_f(rel), "z": fmt_f(z), "samples": str(est.samples)}
    return CaseResult(case, fields, ok, _failure(MC_ANCHOR, "; ".join(problems)) if problems else "")


register("radon-mc", 6, MC_ANCHOR, MC_NOTES)((_mc_cases, _mc_run))


# -- criterion 7: end-to-end inversion ----------------------------------------
INV_ANCHOR = "S R'R = I with S = c_{beta,l}(rho)^(-1) Psi^(beta+l) L^l Psi^(-beta)"
INV_DEFAULT = [(2, 3, 1, 2, 2), (1, 4, 1, 3, 2)]


def _inv_cases(cfg: RunConfig) -> list:
    return _mc_grid(cfg, INV_DEFAULT, lambda r: _pick(cfg.m, (2,)))


def _inv_run(case: tuple, cfg: RunConfig) -> CaseResult:
    from .radon import inversion_check

    d, n, r, rp, m = case
    rep = inversion_check(RadonSpec(d, n, r, rp), m, cfg.samples, seed=cfg.seed, stream=_stream(case))
    est = rep.estimate
    z = est.zscore(rep.target)
    problems = []
    if not rep.exact_ok:
        bad = [f"{fmt_mu(mu)}: {fmt_q(v)} != {fmt_q(rep.coefficients[mu])}" for mu, v in rep.exact_terms.items()
               if v != rep.coefficients[mu]]
        problems.append("exact route a*eigenvalue*gamma != a for " + ", ".join(bad))
    if not rep.mc_ok:
        problems.append(f"(R'R Sf)(y0) estimate {fmt_f(est.mean)} vs f(y0) = {fmt_q(rep.target)} ({fmt_f(z)} standard errors)")
    coeffs = " ".join(f"{fmt_mu(mu)}:{fmt_q(a)}" for mu, a in rep.coefficients.items())
    fields = {"d": str(d), "n": str(n), "r": str(r), "rprime": str(rp), "m": str(m), "l": str(int(rep.radon.l)),
              "coefficients": coeffs, "f_y0": fmt_q(rep.target), "estimate": fmt_f(est.mean),
              "stderr": fmt_f(est.stderr), "z": fmt_f(z), "exact_route": "ok" if rep.exact_ok else "fail",
              "samples": str(est.samples)}
    return CaseResult(case, fields, rep.ok, _failure(INV_ANCHOR, "; ".join(problems)) if problems else "")


register("inversion", 7, INV_ANCHOR, MC_NOTES)((_inv_cases, _inv_run))


# -- criterion 9: determinism ------------------------------------------------
DET_ANCHOR = "identical RunConfig gives byte-identical reports"


def _det_cases(cfg: RunConfig) -> list:
    return [("radon-mc",), ("inversion",)]


def _det_run(case: tuple, cfg: RunConfig) -> CaseResult:
    inner = RunConfig(case[0], seed=cfg.seed, samples=cfg.samples, format=cfg.format)
    digests = []
    for _ in range(2):
        text, _ = run_suite(inner)
        digests.append(hashlib.sha256(text.encode()).hexdigest())
    ok = digests[0] == digests[1]
    fields = {"suite": case[0], "first_sha256": digests[0], "second_sha256": digests[1]}
    return CaseResult(case, fields, ok, "" if ok else _failure(DET_ANCHOR, "reports differ"))


register("determinism", 9, DET_ANCHOR)((_det_cases, _det_run))

ALIASES = {"capelli-exact": "capelli"}


# -- running and rendering -----------------------------------------------------
def _run_one(args) -> CaseResult:
    name, case, cfg = args
    t = time.perf_counter()
    res = SUITES[name].run(case, cfg)
    res.seconds = time.perf_counter() - t
    return res


def run_cases(cfg: RunConfig, workers: int = 1) -> list[CaseResult]:
    suite = SUITES[cfg.suite]
    cases = suite.cases(cfg)
    jobs = [(cfg.suite, c, cfg) for c in cases]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    try:
        return sorted(results, key=lambda res: res.key)
    except TypeError:
        return sorted(results, key=lambda res: repr(res.key))


def _columns(results: list[CaseResult], timings: bool) -> list[str]:
    cols: list[str] = []
    for res in results:
        for k in res.fields:
            if k not in cols:
                cols.append(k)
    cols += ["status"] + (["seconds"] if timings else []) + ["message"]
    return cols


def _row(res: CaseResult, timings: bool) -> dict:
    row = dict(res.fields)
    row["status"] = "pass" if res.passed else "fail"
    if timings:
        row["seconds"] = format(res.seconds or 0.0, ".3f")
    row["message"] = res.message
    return row


def render(cfg: RunConfig, results: list[CaseResult], kind: str = "verify") -> str:
    suite = SUITES[cfg.suite]
    cols = _columns(results, cfg.timings)
    rows = [_row(res, cfg.timings) for res in results]
    passed = sum(res.passed for res in results)
    if cfg.format == "json":
        doc = {"suite": suite.name, "criterion": suite.criterion, "identity": suite.anchor,
               "config": json.loads(cfg.to_json()), "notes": list(suite.notes), "columns": cols,
               "cases": rows, "summary": {"passed": passed, "failed": len(results) - passed}}
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({c: row.get(c, "") for c in cols})
        return buf.getvalue()
    lines = [f"# {suite.name} (criterion {suite.criterion})", "", f"identity: {suite.anchor}", "",
             f"config: `{cfg.to_json()}`", ""]
    for note in suite.notes:
        lines.append(f"- {note}")
    if suite.notes:
        lines.append("")
    shown = [c for c in cols if c != "message"]
    lines.append("| " + " | ".join(shown) + " |")
    lines.append("|" + "---|" * len(shown))
    for row in rows:
        lines.append("| " + " | ".join(str(row.get(c, "")).replace("|", "\\|") for c in shown) + " |")
    lines += ["", f"summary: {passed} passed, {len(results) - passed} failed"]
    failures = [res for res in results if not res.passed]
    if failures:
        lines += ["", "## failures", ""]
        lines += [f"- {fmt_key(res.key)}: {res.message}" for res in failures]
    return "\n".join(lines) + "\n"


def fmt_key(key) -> str:
    return "(" + ", ".join(fmt_mu(k) if isinstance(k, tuple) else str(k) for k in key) + ")"


def run_suite(cfg: RunConfig, workers: int = 1) -> tuple[str, int]:
    """Run a suite; returns the rendered report and the exit status."""
    if cfg.suite not in SUITES:
        raise ConfigError(f"unknown suite {cfg.suite!r}")
    if cfg.format not in FORMATS:
        raise ConfigError(f"unknown format {cfg.format!r}")
    try:
        results = run_cases(cfg, workers)
    except (LargeCaseDisabled, RankViolation) as exc:
        raise ConfigError(str(exc)) from None
    text = render(cfg, results)
    return text, 0 if all(res.passed for res in results) else 1


# -- tables --------------------------------------------------------------------
GAMMA_COLUMNS = ["d", "n", "r", "rprime", "l", "mu", "gamma", "eta_minus_alpha", "eta_minus_beta", "inversion_eigenvalue"]
C_COLUMNS = ["d", "n", "r", "s", "l", "mu", "c"]


def gamma_table(cfg: RunConfig) -> list[dict]:
    rows = []
    total = 4 if cfg.mu_max is None else cfg.mu_max
    for d in _pick(cfg.d, (1, 2, 4)):
        for n in _pick(cfg.n, range(2, 7)):
            for r in _pick(cfg.r, range(1, n // 2 + 1)):
                for rp in _pick(cfg.rprime, range(r, n - r + 1)):
                    if d not in (1, 2, 4) or not 1 <= r <= rp <= n - r:
                        continue
                    spec = RadonSpec(d, n, r, rp)
                    if not spec.condition_ii:
                        continue
                    for mu in partitions_up_to(r, total):
                        rows.append({
                            "d": str(d), "n": str(n), "r": str(r), "rprime": str(rp), "l": str(int(spec.l)),
                            "mu": fmt_mu(mu), "gamma": fmt_q(gamma_mu(spec, mu)),
                            "eta_minus_alpha": fmt_q(eta_mu(-spec.alpha, mu, d, n)),
                            "eta_minus_beta": fmt_q(eta_mu(-spec.beta, mu, d, n)),
                            "inversion_eigenvalue": fmt_q(inversion_eigenvalue(spec, mu)),
                        })
    return rows


def c_table(cfg: RunConfig) -> list[dict]:
    rows = []
    total = 4 if cfg.mu_max is None else cfg.mu_max
    svals = list(cfg.s) if cfg.s is not None else [None]
    for d in _pick(cfg.d, (1, 2, 4)):
        for n in _pick(cfg.n, range(2, 7)):
            for r in _pick(cfg.r, range(1, n // 2 + 1)):
                if d not in (1, 2, 4) or not 1 <= r <= n - r:
                    continue
                for l in _pick(cfg.l, (1, 2)):
                    for s in svals:
                        for mu in partitions_up_to(r, total):
                            val = c_sl(d, n, r, s, mu, l)
                            rows.append({
                                "d": str(d), "n": str(n), "r": str(r), "s": "s" if s is None else fmt_q(s),
                                "l": str(l), "mu": fmt_mu(mu), "c": val.to_str() if s is None else fmt_q(val),
                            })
    return rows


def render_table(rows: list[dict], cols: list[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"columns": cols, "rows": rows}, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    lines += ["| " + " | ".join(row[c] for c in cols) + " |" for row in rows]
    return "\n".join(lines) + "\n"


# -- click interface -------------------------------------------------------------
class IntList(click.ParamType):
    """Comma-separated integers and inclusive ranges ``a..b``."""

    name = "ints"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        out = []
        try:
            for part in str(value).split(","):
                part = part.strip()
                if ".." in part:
                    a, b = part.split("..")
                    out.extend(range(int(a), int(b) + 1))
                elif part:
                    out.append(int(part))
        except ValueError:
            self.fail(f"{value!r} is not a list of integers", param, ctx)
        return tuple(out)


class RationalList(click.ParamType):
    name = "rationals"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        try:
            return tuple(Fraction(p.strip()) for p in str(value).split(",") if p.strip())
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a list of rationals p/q", param, ctx)


class Partition(click.ParamType):
    name = "mu"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        try:
            return tuple(int(p) for p in str(value).strip("()").split(",") if p.strip())
        except ValueError:
            self.fail(f"{value!r} is not a partition like 2,0", param, ctx)


def grid_options(f):
    opts = [
        click.option("--d", type=IntList(), help="Division algebra dimension(s): 1, 2, 4."),
        click.option("--n", type=IntList(), help="n values, e.g. 3..5."),
        click.option("--r", type=IntList(), help="Rank(s) r."),
        click.option("--rprime", type=IntList(), help="Target rank(s) r'."),
        click.option("--m", type=IntList(), help="Degree parameter(s) m (k for rank-one)."),
        click.option("--l", type=IntList(), help="Capelli power(s) l."),
        click.option("--p", type=IntList(), help="Line-bundle twist(s) p."),
        click.option("--s", type=RationalList(), help="Rational value(s) of s, p/q."),
        click.option("--mu", type=Partition(), multiple=True, help="Partition, e.g. 2,0 (repeatable)."),
        click.option("--mu-max", type=int, help="Largest |mu| for grids over partitions."),
        click.option("--seed", type=int, default=0, show_default=True),
        click.option("--samples", type=int, default=100_000, show_default=True),
        click.option("--format", "fmt", type=click.Choice(FORMATS), default="markdown", show_default=True),
        click.option("--out", type=click.Path(), help="Output file (verify) or directory (tables)."),
        click.option("--large", is_flag=True, help="Allow quaternionic rank-2 spaces."),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _config(suite: str, kw: dict, **extra) -> RunConfig:
    return RunConfig(
        suite=suite, d=kw["d"], n=kw["n"], r=kw["r"], rprime=kw["rprime"], m=kw["m"], l=kw["l"], p=kw["p"],
        s=kw["s"], mu=tuple(kw["mu"]) if kw["mu"] else None, mu_max=kw["mu_max"], seed=kw["seed"],
        samples=kw["samples"], format=kw["fmt"], large=kw["large"], **extra,
    )


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@click.group()
def main():
    """Exact and Monte-Carlo verification of Capelli spectra and Radon inversion."""


@main.command()
@click.argument("suite", type=click.Choice(sorted(SUITES) + sorted(ALIASES)))
@grid_options
@click.option("--timings", is_flag=True, help="Add wall-clock seconds per case (reports stop being reproducible).")
@click.option("--workers", type=int, default=1, show_default=True, help="Process pool size for cases.")
@click.option("--max-rel-se", type=float, help="Also fail MC cases whose relative standard error exceeds this.")
def verify(suite, timings, workers, max_rel_se, **kw):
    """Run one verification SUITE and exit 0 (pass), 1 (failure) or 2 (bad config)."""
    cfg = _config(ALIASES.get(suite, suite), kw, timings=timings, max_rel_se=max_rel_se)
    text, status = run_suite(cfg, workers)
    _emit(text, kw["out"])
    sys.exit(status)


@main.command()
@click.option("--table", type=click.Choice(["gamma", "c", "all"]), default="all", show_default=True)
@grid_options
def tables(table, **kw):
    """Write exact tables of gamma_mu and c_{s,l}(mu + rho)."""
    import os

    cfg = _config("tables", kw)
    fmt = cfg.format
    ext = {"csv": "csv", "json": "json", "markdown": "md"}[fmt]
    todo = []
    if table in ("gamma", "all"):
        todo.append(("gamma", render_table(gamma_table(cfg), GAMMA_COLUMNS, fmt)))
    if table in ("c", "all"):
        todo.append(("c", render_table(c_table(cfg), C_COLUMNS, fmt)))
    out = kw["out"]
    if out:
        os.makedirs(out, exist_ok=True)
        for name, text in todo:
            with open(os.path.join(out, f"{name}.{ext}"), "w", encoding="utf-8") as fh:
                fh.write(text)
    else:
        for name, text in todo:
            if len(todo) > 1:
                click.echo(f"## {name}")
            click.echo(text, nl=False)


if __name__ == "__main__":
    main()
