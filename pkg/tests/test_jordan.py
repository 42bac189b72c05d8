import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from capelli.exactcore import SparsePoly
from capelli.jordan import (
    AlgPolyMatrix,
    NonHermitianInput,
    SingularMatrix,
    algebra,
    complex_to_components,
    components_to_complex,
    dnu,
    embedding_det,
    gram,
    jordan_det,
    moore_det,
    nu,
    psi,
    quat_mul,
)
from capelli.jordan import jordan_det_via_embedding, nu_exact


def x0(d, n, r):
    return AlgPolyMatrix.from_numeric(d, [[1 if i == j else 0 for j in range(r)] for i in range(n)])


def random_components(rng, rows, cols, d):
    return rng.standard_normal((rows, cols, d))


def haar_components(rng, n, d):
    """Random element of U(n, F) as (n, n, d) components."""
    if d == 4:
        a = random_components(rng, n, n, 4)
        m = components_to_complex(a)
        q, rr = np.linalg.qr(m)
        q = q * (np.diag(rr) / abs(np.diag(rr)))
        return complex_to_components(q, 4)
    m = rng.standard_normal((n, n)) + (1j * rng.standard_normal((n, n)) if d == 2 else 0)
    q, _ = np.linalg.qr(m)
    return complex_to_components(q, d)


def test_division_algebra_tags():
    assert algebra("H").d == 4
    assert algebra(2).tag == "C"
    with pytest.raises(ValueError):
        algebra(3)


def test_quaternion_units():
    i, j, k = (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)
    assert quat_mul(i, j) == k
    assert quat_mul(j, i) == (0, 0, 0, -1)
    assert quat_mul(i, i) == (-1, 0, 0, 0)


@pytest.mark.parametrize("d,n,r", [(1, 3, 2), (2, 3, 1), (4, 2, 2)])
def test_gram_of_base_point_is_identity(d, n, r):
    assert gram(x0(d, n, r)) == AlgPolyMatrix.identity(d, r)


def test_gram_rank_one_real():
    a, b = SparsePoly.variables(2)
    assert gram(AlgPolyMatrix.symbolic(1, 2, 1)).entries == [[(a * a + b * b,)]]


def test_gram_quaternion_numeric_is_hermitian():
    w = AlgPolyMatrix.from_numeric(4, [[(1, 2, 0, -1), (0, 1, 1, 0)], [(Fraction(1, 2), 0, 3, 1), (2, 0, 0, 1)]])
    g = gram(w)
    assert g.is_hermitian()
    for i in range(2):
        assert all(c.is_zero() for c in g.entries[i][i][1:])


def test_gram_symbolic_is_hermitian():
    for d in (1, 2, 4):
        assert gram(AlgPolyMatrix.symbolic(d, 2, 2)).is_hermitian()


def test_jordan_det_examples():
    assert jordan_det(AlgPolyMatrix.identity(4, 3)) == 1
    a, b, c = SparsePoly.variables(3)
    m = AlgPolyMatrix(1, [[(a,), (b,)], [(b,), (c,)]], 3)
    assert jordan_det(m) == a * c - b * b


def test_quaternion_hermitian_2x2():
    q = (0, 1, 1, 0)
    m = AlgPolyMatrix.from_numeric(4, [[2, q], [(0, -1, -1, 0), 3]])
    assert embedding_det(m) == 16
    assert jordan_det(m) == 4
    assert jordan_det_via_embedding(m) == 4


def test_non_hermitian_rejected():
    m = AlgPolyMatrix.from_numeric(1, [[1, 2], [3, 4]])
    with pytest.raises(NonHermitianInput):
        jordan_det(m)


@pytest.mark.parametrize("d", [1, 2, 4])
def test_moore_determinant_squared_is_embedding_determinant_symbolic(d):
    # embedding of an r x r matrix over C or H is 2r x 2r for H, r x r for R and C
    g = gram(AlgPolyMatrix.symbolic(d, 2, 2))
    det = jordan_det(g)
    emb = embedding_det(g)
    assert (det * det if d == 4 else det) == emb


@given(st.integers(0, 10**6))
def test_moore_vs_embedding_numeric_r3(seed):
    rng = np.random.default_rng(seed)
    vals = rng.integers(-3, 4, size=(3, 3, 4)).tolist()
    w = AlgPolyMatrix.from_numeric(4, [[tuple(e) for e in row] for row in vals])
    h = w + w.dagger()
    det = jordan_det(h)
    assert det * det == embedding_det(h)
    # the imaginary components of the Moore determinant cancel
    assert all(c.is_zero() for c in moore_det(h)[1:])


def test_jordan_det_gradient_at_identity_is_reduced_trace():
    # (D_u det)(e) = Re tr u for Hermitian u
    for d in (1, 2, 4):
        for r in (1, 2):
            t = SparsePoly.variable(0, 1)
            rng = np.random.default_rng(d * 10 + r)
            u = [[None] * r for _ in range(r)]
            for i in range(r):
                u[i][i] = (int(rng.integers(-5, 6)),) + (0,) * (d - 1)
                for j in range(i + 1, r):
                    e = tuple(int(v) for v in rng.integers(-5, 6, size=d))
                    u[i][j] = e
                    u[j][i] = (e[0],) + tuple(-v for v in e[1:])
            path = AlgPolyMatrix(
                d,
                [[tuple((1 if (i == j and a == 0) else 0) + t * c for a, c in enumerate(u[i][j])) for j in range(r)] for i in range(r)],
                1,
            )
            assert jordan_det(path).diff(0).evaluate([0]) == sum(u[i][i][0] for i in range(r))


def test_psi_rank_one_and_square():
    xs = SparsePoly.variables(3)
    assert psi(1, 3, 1) == sum((x * x for x in xs), SparsePoly.zero(3))
    a, b, c, dd = SparsePoly.variables(4)  # rows (a, b), (c, dd)
    assert psi(1, 2, 2) == (a * dd - b * c) ** 2


@pytest.mark.parametrize("n,r", [(3, 2), (4, 2)])
def test_psi_cauchy_binet(n, r):
    xs = SparsePoly.variables(n * r)
    entry = lambda i, j: xs[i * r + j]
    total = SparsePoly.zero(n * r)
    for rows in itertools.combinations(range(n), r):
        minor = SparsePoly.zero(n * r)
        for perm in itertools.permutations(range(r)):
            sign = (-1) ** sum(1 for a in range(r) for b in range(a + 1, r) if perm[a] > perm[b])
            term = SparsePoly.one(n * r)
            for k in range(r):
                term = term * entry(rows[k], perm[k])
            minor = minor + term * sign
        total = total + minor * minor
    assert psi(1, n, r) == total


@pytest.mark.parametrize("d,n,r", [(1, 3, 2), (2, 2, 1), (4, 2, 1)])
def test_psi_homogeneity(d, n, r):
    p = psi(d, n, r)
    lam = Fraction(3, 2)
    nv = p.nvars
    scaled = p.substitute([SparsePoly.variable(i, nv) * lam for i in range(nv)])
    assert scaled == p * lam ** (2 * r)
    assert p.total_degree() == 2 * r


def test_nu_examples():
    q = np.array([[[1.0, 2.0, -1.0, 0.5]]])
    assert nu(q) == pytest.approx(1 + 4 + 1 + 0.25)
    for d in (1, 2, 4):
        x = np.zeros((3, 3, d))
        x[:, :, 0] = np.eye(3)
        assert dnu(x) == 6
    with pytest.raises(SingularMatrix):
        nu(np.zeros((2, 2, 1)))


def test_nu_exact_quaternion_scalar():
    q = AlgPolyMatrix.from_numeric(4, [[(1, 2, -1, Fraction(1, 2))]])
    assert nu_exact(q) == Fraction(25, 4)


@pytest.mark.parametrize("d", [1, 2, 4])
def test_nu_multiplicative_and_derivative(d):
    rng = np.random.default_rng(d)
    for _ in range(5):
        g, h = random_components(rng, 3, 3, d), random_components(rng, 3, 3, d)
        gh = complex_to_components(components_to_complex(g) @ components_to_complex(h), d)
        assert nu(gh) == pytest.approx(nu(g) * nu(h), rel=1e-10)
    x = random_components(rng, 3, 3, d)
    xc = components_to_complex(x)
    t = 1e-6
    exp = lambda m: complex_to_components(_expm(m), d)
    deriv = (nu(exp(t * xc)) - nu(exp(-t * xc))) / (2 * t)
    assert deriv == pytest.approx(dnu(x), rel=1e-6, abs=1e-8)


def _expm(m):
    out = np.eye(len(m), dtype=complex)
    term = np.eye(len(m), dtype=complex)
    for k in range(1, 30):
        term = term @ m / k
        out = out + term
    return out


@pytest.mark.parametrize("d,n,r", [(1, 4, 2), (2, 3, 2), (4, 3, 2)])
def test_psi_equivariance(d, n, r):
    rng = np.random.default_rng(n * d + r)
    p = psi(d, n, r)
    for _ in range(3):
        w = random_components(rng, n, r, d)
        k = haar_components(rng, n, d)
        g = random_components(rng, r, r, d)
        kwg = complex_to_components(components_to_complex(k) @ components_to_complex(w) @ components_to_complex(g), d)
        lhs = p.evaluate(kwg.reshape(-1).tolist())
        rhs = nu(g) * p.evaluate(w.reshape(-1).tolist())
        assert lhs == pytest.approx(rhs, rel=1e-9)
        assert p.evaluate(w.reshape(-1).tolist()) > 0


def test_components_round_trip():
    rng = np.random.default_rng(0)
    for d in (1, 2, 4):
        a = random_components(rng, 3, 2, d)
        assert np.allclose(complex_to_components(components_to_complex(a), d), a)
