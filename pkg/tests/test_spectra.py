import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from capelli.exactcore import ParamPoly
from capelli.ktypes import build_equivariant_space, decompose, enumerate_lambda_m
from capelli.spectra import (
    ConditionViolation,
    HCImage,
    NonTelescoping,
    ParityViolation,
    PolePochhammer,
    RadonSpec,
    WrongDivisionAlgebra,
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
    q_l,
    radial_eigenvalue,
    radon_cases,
)

rationals = st.fractions(min_value=-30, max_value=30, max_denominator=6)
S = ParamPoly.s()


def test_plane_constants():
    assert c_sl(1, 2, 1, None).to_str() == "4*s^2"


@given(st.sampled_from([1, 2, 4]), st.integers(2, 9), st.integers(0, 4))
def test_vanishing_at_minus_m(d, n, m):
    assert c_sl(d, n, 1, -m, (2 * m,)) == 0


@given(rationals, rationals, rationals, st.integers(1, 3))
def test_weyl_group_invariance(s, z1, z2, l):
    h = HCImage(2, 6, 2, l)
    base = h.c(s, [z1, z2])
    assert h.c(s, [-z1, z2]) == base
    assert h.c(s, [z2, z1]) == base
    assert h.c(s, [z2, -z1]) == base


def test_q_l_matches_single_factor_form():
    assert q_l(Fraction(5), [Fraction(3)]) == 16
    assert q_l(Fraction(5), [Fraction(3)], 2) == 16 * (49 - 9)


@given(st.sampled_from([1, 2, 4]), st.integers(2, 8), st.data())
def test_leading_coefficient_and_degree(d, n, data):
    r = data.draw(st.integers(1, n // 2))
    l = data.draw(st.integers(1, 3))
    c = c_sl(d, n, r, None, l=l)
    assert c.degree == 2 * r * l
    assert c.scalar_coeffs()[-1] == 2 ** (2 * r * l)


@given(st.sampled_from([1, 2, 4]), st.integers(2, 10), st.integers(0, 5))
def test_rank_one_matches_radial_laplacian(d, n, k):
    assert c_sl(d, n, 1, None, (2 * k,)) == radial_eigenvalue(d, n, k)


def test_line_bundle_reduces_to_c_sl():
    for s in (Fraction(1, 3), Fraction(-2)):
        assert line_bundle_eigenvalue(2, 3, 1, s, 0, (2,)) == c_sl(2, 3, 1, s, (2,))


@given(rationals, st.integers(-3, 3), st.integers(0, 3))
def test_line_bundle_conjugation_symmetry(s, p, k):
    mu = (abs(p) + 2 * k,)
    assert line_bundle_eigenvalue(2, 4, 1, s, p, mu) == line_bundle_eigenvalue(2, 4, 1, s - p, -p, mu)


def test_line_bundle_formula_by_substitution():
    # raw formula at rho_1 = 2, mu + rho = 4
    assert HCImage(2, 3, 1).c(None, [4], p=1) == (2 * S - 3) * (2 * S - 3) - 16


def test_line_bundle_rejects_types_outside_twisted_lattice():
    with pytest.raises(ValueError):
        line_bundle_eigenvalue(2, 3, 1, 0, 1, (2,))
    with pytest.raises(WrongDivisionAlgebra):
        line_bundle_eigenvalue(1, 3, 1, 0, 1, (1,))


def test_line_bundle_against_operator_matrix():
    dec = decompose(build_equivariant_space(2, 3, 1, 1, p=1))
    assert dec.block((1,)).eigenvalue == (2 * S - 3) * (2 * S - 3) - 9
    assert dec.block((3,)).eigenvalue == (2 * S - 3) * (2 * S - 3) - 25
    for blk in dec.blocks:
        assert blk.eigenvalue == line_bundle_eigenvalue(2, 3, 1, None, 1, blk.mu.parts)


@given(rationals)
def test_gen_pochhammer_examples(c):
    assert gen_pochhammer(c, (0, 0), 2) == 1
    assert gen_pochhammer(c, (1, 1), 2) == c * (c - 1)
    assert gen_pochhammer(c, (2, 1), 1) == c * (c + 1) * (c - Fraction(1, 2))


def test_eta_examples():
    assert eta_mu(Fraction(7, 3), (0,), 1, 3) == 1
    assert eta_mu(Fraction(-1, 2), (2,), 1, 3) == Fraction(-1, 2)
    assert eta_mu(-1, (2,), 2, 3) == Fraction(-1, 2)
    with pytest.raises(PolePochhammer):
        eta_mu(-1, (2,), 1, 2)


def test_gamma_examples():
    assert gamma_mu(RadonSpec(2, 3, 1, 2), (0,)) == 1
    assert gamma_mu(RadonSpec(2, 3, 1, 2), (2,)) == Fraction(1, 4)
    for m in range(6):
        assert gamma_mu(RadonSpec(1, 4, 1, 3), (2 * m,)) == Fraction(1, (2 * m + 1) ** 2)


def test_inversion_examples():
    spec = RadonSpec(2, 3, 1, 2)
    assert inversion_eigenvalue(spec, (0,)) == 1
    assert inversion_eigenvalue(spec, (2,)) == 4 == 1 / gamma_mu(spec, (2,))
    for m in range(6):
        assert inversion_eigenvalue(RadonSpec(1, 4, 1, 3), (2 * m,)) == (2 * m + 1) ** 2


def test_inversion_condition_errors():
    with pytest.raises(ParityViolation):
        inversion_constant(RadonSpec(1, 4, 1, 2))
    with pytest.raises(ConditionViolation):
        inversion_constant(RadonSpec(1, 4, 1, 4))
    with pytest.raises(ConditionViolation):
        RadonSpec(1, 5, 2, 1)


def test_radon_parameters_balance():
    for spec in radon_cases(12):
        assert spec.alpha + spec.beta + spec.l == Fraction(spec.d * spec.n, 2)


@given(st.sampled_from(radon_cases(9)), st.data())
def test_inversion_identity_sampled(spec, data):
    mu = data.draw(st.sampled_from(partitions_up_to(spec.r, 10)))
    l = int(spec.l)
    assert gamma_mu(spec, mu) * c_sl(spec.d, spec.n, spec.r, spec.beta, mu, l) == inversion_constant(spec)


@given(st.sampled_from(radon_cases(9)), st.data())
def test_factorized_epsilon(spec, data):
    mu = data.draw(st.sampled_from(partitions_up_to(spec.r, 6)))
    l = int(spec.l)
    prod = Fraction(1)
    for i in range(l):
        prod *= c_sl(spec.d, spec.n, spec.r, spec.beta + i, mu, 1)
    assert prod == c_sl(spec.d, spec.n, spec.r, spec.beta, mu, l)


def test_gindikin_trivial_and_hand_example():
    rep = gindikin_identity_check(2, 5, 2, Fraction(3, 2), 0, (2, 0))
    assert rep.lhs == rep.rhs == 1
    rep = gindikin_identity_check(1, 4, 1, Fraction(1, 2), 1, (2,))
    # oracle: float Gamma functions
    g = math.gamma
    s, m = 0.5, 1
    oracle = -4 * g(s + 1 + m) / g(s + m) * g(-s + 2 + m) / g(-s + 2 - 1 + m)
    assert rep.holds and rep.power == 2
    assert float(rep.lhs) == pytest.approx(oracle) == -9


def test_gindikin_rejects_fractional_l():
    with pytest.raises(NonTelescoping):
        gindikin_identity_check(1, 4, 1, 0, Fraction(1, 2), (0,))


def test_gindikin_grid_holds():
    grid = gindikin_grid()
    assert len(grid) == 50
    assert grid == gindikin_grid()
    for case in grid:
        assert gindikin_identity_check(*case).holds, case


@pytest.mark.parametrize("spec", radon_cases(8))
def test_gindikin_specialization(spec):
    sp = gindikin_specialization(spec)
    assert sp.constant == inversion_constant(spec) == sp.first_display
    assert 2 * int(spec.l) * spec.r in sp.balancing_powers
    assert sp.second_display_is_reciprocal


def test_partitions_up_to():
    assert partitions_up_to(2, 4) == [(0, 0), (2, 0), (2, 2), (4, 0)]
    assert all(p in partitions_up_to(3, 10) for p in (m.parts for m in enumerate_lambda_m(3, 1)))
