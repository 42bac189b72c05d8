import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from capelli.exactcore import SparsePoly
from capelli.frames import CoordinateFrame
from capelli.jordan import complex_to_components, components_to_complex, nu
from capelli.ktypes import (
    EvenPartition,
    LargeCaseDisabled,
    RankViolation,
    annihilation_residual,
    build_equivariant_space,
    decompose,
    enumerate_lambda_m,
    predicted_eigenvalue,
    spherical_polynomial,
    structure,
    verify_eigenbasis,
    weyl_dim,
)

from .helpers import space_and_matrix


def test_structure_examples():
    s = structure(1, 4, 1)
    assert s.rho == (1,)
    assert s.multiplicities["e_i"] == 2 and s.multiplicities["2e_i"] == 0
    assert structure(2, 3, 1).rho == (2,)
    h = structure(4, 2, 1)
    assert h.rho == (3,)
    assert h.multiplicities["e_i"] == 0 and h.multiplicities["2e_i"] == 3


@given(st.sampled_from([1, 2, 4]), st.integers(2, 12), st.data())
def test_rho_steps_by_d(d, n, data):
    r = data.draw(st.integers(1, n // 2))
    s = structure(d, n, r)
    assert all(a - b == d for a, b in zip(s.rho, s.rho[1:]))
    assert all(v >= 0 for v in s.multiplicities.values())


def test_rank_violation():
    with pytest.raises(RankViolation):
        structure(1, 3, 2)


def test_lambda_m_examples():
    assert [m.parts for m in enumerate_lambda_m(1, 2)] == [(0,), (2,), (4,)]
    assert [m.parts for m in enumerate_lambda_m(2, 1)] == [(0, 0), (2, 0), (2, 2)]
    assert [m.parts for m in enumerate_lambda_m(1, 1, twist=1)] == [(1,), (3,)]


@given(st.integers(1, 4), st.integers(0, 5))
def test_lambda_m_count_matches_box_partitions(r, m):
    got = [p.parts for p in enumerate_lambda_m(r, m)]
    brute = sorted(
        {tuple(sorted(t, reverse=True)) for t in itertools.product(range(0, 2 * m + 1, 2), repeat=r)},
        key=lambda t: (sum(t), t),
    )
    assert len(got) == len(set(got)) == comb(m + r, r)
    assert sorted(got, key=lambda t: (sum(t), t)) == got == brute


def test_even_partition_validation():
    with pytest.raises(ValueError):
        EvenPartition((2, 4))
    with pytest.raises(ValueError):
        EvenPartition((3,))
    assert EvenPartition((4, 2)).m == (2, 1)


@pytest.mark.parametrize("case,dim", [((1, 3, 1, 1), 6), ((1, 4, 2, 1), 20), ((2, 3, 1, 1), 9)])
def test_space_dimensions(case, dim):
    sp = build_equivariant_space(*case)
    assert sp.dim == dim == sp.expected_dim()


def test_complex_space_has_bidegree_one_one():
    sp = build_equivariant_space(2, 3, 1, 1)
    frame = sp.frame
    for f in sp.basis:
        for exps in f.terms():
            hol = sum(e for v, e in enumerate(exps) if not frame.is_conjugate_variable(v))
            assert hol == 1 and sum(exps) - hol == 1


@pytest.mark.parametrize("case", [(1, 3, 1, 2), (2, 3, 1, 1), (4, 2, 1, 1), (1, 4, 2, 1)])
def test_psi_power_belongs_to_the_space(case):
    from capelli.exactcore.linalg import LinearCoordinates

    sp = build_equivariant_space(*case)
    LinearCoordinates([b.packed for b in sp.basis]).coordinates((sp.frame.psi ** case[3]).packed)


@pytest.mark.parametrize("d,n,r,m", [(1, 3, 1, 2), (4, 2, 1, 1), (1, 4, 2, 1)])
def test_basis_is_equivariant_numerically(d, n, r, m):
    sp = build_equivariant_space(d, n, r, m)
    frame = CoordinateFrame(d, n, r)
    rng = np.random.default_rng(0)
    w = rng.standard_normal((n, r, d))
    g = rng.standard_normal((r, r, d))
    wg = complex_to_components(components_to_complex(w) @ components_to_complex(g), d)
    for f in sp.basis[:5]:
        lhs = f.evaluate(frame.point(wg.tolist()))
        rhs = nu(g) ** m * f.evaluate(frame.point(w.tolist()))
        assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-9)


def test_weyl_dimension_examples():
    assert weyl_dim(1, 3, (2,)) == 5
    assert weyl_dim(2, 3, (2,)) == 8
    assert weyl_dim(4, 2, (2,)) == 5
    assert weyl_dim(1, 4, (2, 2)) == 10


@pytest.mark.parametrize(
    "case,blocks",
    [
        ((1, 3, 1, 1), {(0,): 1, (2,): 5}),
        ((1, 4, 2, 1), {(0, 0): 1, (2, 0): 9, (2, 2): 10}),
        ((2, 3, 1, 1), {(0,): 1, (2,): 8}),
    ],
)
def test_decomposition_blocks(case, blocks):
    sp, B = space_and_matrix(*case)
    dec = decompose(sp, B)
    assert {b.mu.parts: b.dim for b in dec.blocks} == blocks
    assert verify_eigenbasis(dec, B) == []
    assert sp.dim == sum(weyl_dim(case[0], case[1], mu) for mu in blocks)


@pytest.mark.parametrize("case", [(1, 3, 1, 2), (4, 2, 1, 1), (2, 4, 1, 1)])
def test_annihilation_identity_direct(case):
    sp, B = space_and_matrix(*case)
    evs = [predicted_eigenvalue(sp.d, sp.n, sp.r, mu.parts) for mu in sp.types]
    assert annihilation_residual(B, evs)
    # dropping a factor breaks it
    assert not annihilation_residual(B, evs[:-1])


@pytest.mark.parametrize("p", [-2, -1, 1, 2])
def test_line_bundle_spaces(p):
    sp = build_equivariant_space(2, 3, 1, 1, p=p)
    assert sp.dim == sp.expected_dim()
    dec = decompose(sp)
    assert [b.mu.parts for b in dec.blocks] == [mu.parts for mu in enumerate_lambda_m(1, 1, twist=abs(p))]
    assert verify_eigenbasis(dec, dec.matrix) == []


def test_twist_needs_complex_field():
    with pytest.raises(ValueError):
        build_equivariant_space(1, 3, 1, 1, p=1)


def test_quaternionic_rank_two_is_gated():
    with pytest.raises(LargeCaseDisabled):
        build_equivariant_space(4, 4, 2, 1)


def test_spherical_examples():
    dec = decompose(build_equivariant_space(1, 3, 1, 1))
    x1, x2, x3 = SparsePoly.variables(3)
    assert spherical_polynomial(dec, (0,)) == dec.space.frame.psi
    assert spherical_polynomial(dec, (2,)) == x1 * x1 - (x2 * x2 + x3 * x3) / 2


@pytest.mark.parametrize("case", [(1, 3, 1, 2), (2, 3, 1, 1), (4, 2, 1, 1), (1, 4, 2, 1)])
def test_spherical_normalized_and_invariant(case):
    sp, B = space_and_matrix(*case)
    dec = decompose(sp, B)
    frame = sp.frame
    rng = np.random.default_rng(1)
    d, n, r = case[:3]
    # block-diagonal element of K_r x K_{n-r}
    blocks = []
    for size in (r, n - r):
        m = rng.standard_normal((size, size)) + (1j * rng.standard_normal((size, size)) if d == 2 else 0)
        if d == 4:
            m = components_to_complex(rng.standard_normal((size, size, 4)))
        q, rr = np.linalg.qr(m)
        blocks.append(q * (np.diag(rr) / abs(np.diag(rr))))
    k = np.zeros((len(blocks[0]) + len(blocks[1]),) * 2, dtype=complex)
    k[: len(blocks[0]), : len(blocks[0])] = blocks[0]
    k[len(blocks[0]):, len(blocks[0]):] = blocks[1]
    w = rng.standard_normal((n, r, d))
    kw = complex_to_components(k @ components_to_complex(w), d)
    for blk in dec.blocks:
        g = spherical_polynomial(dec, blk.mu.parts)
        assert g.evaluate(frame.x0()) == 1
        assert g.evaluate(frame.point(kw.tolist())) == pytest.approx(g.evaluate(frame.point(w.tolist())), rel=1e-8)
