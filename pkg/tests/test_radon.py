from fractions import Fraction

import numpy as np
import pytest

from capelli.jordan import complex_to_components, components_to_complex
from capelli.ktypes import RankViolation
from capelli.radon import (
    CHUNK,
    EstimatorDisagreement,
    Frame,
    HaarSampler,
    MCEstimate,
    dual_radon_mc,
    eta0_point,
    gamma_mc,
    haar_unitary,
    inversion_check,
    phi_at_y1_exact,
    principal_sin,
    radon_mc,
    random_coefficients,
    sine_moment_mc,
    spherical_function,
    square_identity_mc,
    x0_point,
    y1_point,
)
from capelli.spectra import RadonSpec, eta_mu

FIELDS = [1, 2, 4]


def projector_trace(a_diag):
    """``f(y) = Re tr(P_y A)`` for a real diagonal A, on component batches."""
    a_diag = np.asarray(a_diag, dtype=float)

    def f(comps):
        d = comps.shape[-1]
        c = components_to_complex(comps)
        a = np.repeat(a_diag, 2) if d == 4 else a_diag
        val = np.einsum("...ij,i,...ij->...", c.conj(), a, c).real
        return val / 2 if d == 4 else val

    return f


def rotated_frame(d, n, r, rng):
    comps = rng.standard_normal((n, r, d))
    q, rr = np.linalg.qr(components_to_complex(comps))
    q = q * (np.diag(rr) / abs(np.diag(rr)))
    return Frame(d, complex_to_components(q, d))


@pytest.mark.parametrize("d", FIELDS)
def test_haar_samples_are_unitary_and_keep_quaternion_structure(d):
    batch = HaarSampler(d, 3, seed=1).sample(200)
    eye = np.eye(batch.shape[-1])
    assert np.abs(np.swapaxes(batch.conj(), -1, -2) @ batch - eye).max() < 1e-12
    back = components_to_complex(complex_to_components(batch, d))
    assert np.abs(back - batch).max() < 1e-12
    k = haar_unitary(d, 3)
    assert k.shape == (3, 3, d)


@pytest.mark.parametrize("d", FIELDS)
def test_haar_second_moment_of_an_entry(d):
    k = 4
    comps = complex_to_components(HaarSampler(d, k, seed=2).sample(20000), d)
    x = (comps[:, 0, 0, :] ** 2).sum(axis=-1)
    se = x.std(ddof=1) / np.sqrt(len(x))
    assert abs(x.mean() - 1 / k) < 4 * se


@pytest.mark.parametrize("d", FIELDS)
def test_haar_is_left_invariant_in_law(d):
    rng = np.random.default_rng(5)
    u = components_to_complex(rotated_frame(d, 3, 3, rng).numeric())
    a = HaarSampler(d, 3, seed=3).sample(20000)
    b = u @ HaarSampler(d, 3, seed=4).sample(20000)
    stat = lambda m: np.abs(m[:, 0, 0]) ** 4
    sa, sb = stat(a), stat(b)
    se = np.hypot(sa.std(ddof=1), sb.std(ddof=1)) / np.sqrt(len(sa))
    assert abs(sa.mean() - sb.mean()) < 4 * se


def test_sampler_streams_are_independent_and_reproducible():
    s = HaarSampler(1, 3, seed=9)
    assert np.array_equal(s.sample(5, chunk=2), s.sample(5, chunk=2))
    assert not np.array_equal(s.sample(5), s.with_stream(1).sample(5))
    assert not np.array_equal(s.sample(5, chunk=0), s.sample(5, chunk=1))


def test_frame_validation_and_points():
    with pytest.raises(ValueError):
        Frame(2, np.zeros((3, 1, 1)))
    y1 = y1_point(1, 4, 2)
    assert y1.is_orthonormal() and y1.exact
    assert [i for i in range(4) if any(y1.data[i, :, 0])] == [2, 3]
    assert x0_point(4, 3, 1).is_orthonormal()
    assert eta0_point(2, 5, 3).r == 3
    with pytest.raises(RankViolation):
        y1_point(1, 3, 2)


def test_principal_sines_examples():
    sines, prod = principal_sin(x0_point(2, 4, 2), x0_point(2, 4, 2))
    assert np.allclose(sines, 0) and prod == pytest.approx(0)
    sines, prod = principal_sin(y1_point(4, 4, 2), x0_point(4, 4, 2))
    assert np.allclose(sines, 1) and prod == pytest.approx(1)
    t = 0.3
    y = np.zeros((3, 1, 1))
    y[0, 0, 0], y[2, 0, 0] = np.cos(t), np.sin(t)
    sines, _ = principal_sin(Frame(1, y), x0_point(1, 3, 1))
    assert sines[0] == pytest.approx(np.sin(t))


@pytest.mark.parametrize("d", FIELDS)
def test_principal_sines_are_m_invariant(d):
    rng = np.random.default_rng(d)
    n, r = 5, 2
    y = rotated_frame(d, n, r, rng)
    k = np.zeros((n, n, d))
    k[:r, :r] = rotated_frame(d, r, r, rng).data
    k[r:, r:] = rotated_frame(d, n - r, n - r, rng).data
    ky = Frame(d, complex_to_components(components_to_complex(k) @ y.complex(), d))
    x0 = x0_point(d, n, r)
    assert np.allclose(principal_sin(ky, x0)[0], principal_sin(y, x0)[0])


def test_phi_at_y1_examples():
    assert phi_at_y1_exact(spherical_function(1, 3, 1, (2,))) == Fraction(-1, 2)
    assert phi_at_y1_exact(spherical_function(2, 3, 1, (0,))) == 1


@pytest.mark.parametrize("case", [(1, 3, 1, (2,)), (1, 3, 1, (4,)), (2, 3, 1, (2,)), (4, 3, 1, (2,)), (1, 4, 2, (2, 0))])
def test_phi_at_y1_is_eta_at_minus_alpha(case):
    d, n, r, mu = case
    alpha = Fraction(d * r, 2)
    assert phi_at_y1_exact(spherical_function(d, n, r, mu)) == eta_mu(-alpha, mu, d, n)


def test_spherical_function_vectorized_matches_exact():
    phi = spherical_function(2, 3, 1, (2,))
    fr = Frame(2, np.array([[[Fraction(1, 2), Fraction(1, 2)]], [[Fraction(1, 2), 0]], [[0, Fraction(-1, 2)]]], dtype=object))
    assert fr.is_orthonormal()
    assert phi(fr.numeric()[None])[0] == pytest.approx(float(phi.exact(fr)))
    assert phi(x0_point(2, 3, 1).numeric()[None])[0] == pytest.approx(1)


def test_radon_of_constant_is_exact():
    est = radon_mc(lambda y: np.ones(len(y)), eta0_point(2, 4, 2), 1, 1000)
    assert est.mean == 1 and est.stderr == 0


@pytest.mark.parametrize("d", FIELDS)
def test_radon_of_projector_trace(d):
    n, r, rp = 5, 1, 3
    a = np.array([3.0, -1.0, 2.0, 0.5, 7.0])
    rng = np.random.default_rng(11)
    eta = rotated_frame(d, n, rp, rng)
    est = radon_mc(projector_trace(a), eta, r, 20000, seed=1)
    exact = r / rp * projector_trace(a)(eta.numeric()[None])[0]
    assert est.agrees(exact)


@pytest.mark.parametrize("d", FIELDS)
def test_radon_equivariance_is_exact_for_common_seeds(d):
    n, r, rp = 4, 1, 2
    rng = np.random.default_rng(12)
    g = components_to_complex(rotated_frame(d, n, n, rng).numeric())
    eta = rotated_frame(d, n, rp, rng)
    f = projector_trace(np.arange(1.0, n + 1))
    g_eta = Frame(d, complex_to_components(g @ eta.complex(), d))
    f_g = lambda y: f(complex_to_components(g @ components_to_complex(y), d))
    a = radon_mc(f, g_eta, r, 3000, seed=5)
    b = radon_mc(f_g, eta, r, 3000, seed=5)
    assert a.mean == pytest.approx(b.mean, rel=1e-12)


@pytest.mark.parametrize("d", FIELDS)
def test_dual_radon_of_projector_trace(d):
    n, r, rp = 5, 1, 3
    a = np.array([3.0, -1.0, 2.0, 0.5, 7.0])
    y = rotated_frame(d, n, r, np.random.default_rng(13))
    F = projector_trace(a)
    ty = F(y.numeric()[None])[0]
    exact = ty + (rp - r) / (n - r) * (a.sum() - ty)
    est = dual_radon_mc(F, y, rp, 20000, seed=2)
    assert est.agrees(exact)


def test_gamma_examples():
    rep = gamma_mc((0,), RadonSpec(2, 3, 1, 2), 100)
    assert rep.exact == 1 and rep.estimate.mean == 1 and rep.estimate.stderr == 0
    rep = gamma_mc((2,), RadonSpec(2, 3, 1, 2), 40000, seed=3)
    assert rep.exact == Fraction(1, 4) and rep.ok
    rep = gamma_mc((4,), RadonSpec(1, 4, 1, 3), 40000, seed=3)
    assert rep.exact == Fraction(1, 25) and rep.ok


def test_sine_weighted_estimator_agrees():
    rep = gamma_mc((2,), RadonSpec(1, 4, 1, 3), 40000, seed=4, sine_weighted=True)
    assert rep.sine_estimate is not None and rep.ok
    with pytest.raises(ValueError):
        gamma_mc((2,), RadonSpec(1, 4, 2, 2), 100, sine_weighted=True)


def test_sine_weighted_estimator_flags_non_invariant_input():
    # x_2^2 is not M-invariant: over eta0 it averages 1/3, over Y with the sine weight 2/9
    f = lambda y: y[..., 1, 0, 0] ** 2
    with pytest.raises(EstimatorDisagreement):
        gamma_mc((2,), RadonSpec(1, 4, 1, 3), 40000, seed=4, sine_weighted=True, phi=f)


@pytest.mark.parametrize("nu", [0, 1, 2])
def test_sine_moments(nu):
    est, exact = sine_moment_mc((2,), 1, 4, 1, nu, 40000, seed=6)
    assert exact == [0, Fraction(-1, 9), Fraction(-1, 6)][nu]
    assert est.agrees(exact)


def test_square_identity():
    est, exact = square_identity_mc((2,), 1, 3, 1, 40000, seed=8)
    assert exact == Fraction(1, 4)
    assert est.agrees(exact)
    with pytest.raises(RankViolation):
        square_identity_mc((2, 0), 1, 5, 2, 10)


def test_inversion_examples():
    rep = inversion_check(RadonSpec(2, 3, 1, 2), 1, 40000, seed=1)
    assert rep.exact_ok and rep.ok
    assert set(rep.coefficients) == {(0,), (2,)}
    coeffs = {(0,): Fraction(1, 2), (2,): 3, (4,): Fraction(-7, 5)}
    rep = inversion_check(RadonSpec(1, 4, 1, 3), 2, 40000, seed=2, coefficients=coeffs)
    assert rep.target == Fraction(21, 10)
    assert rep.exact_terms == {k: Fraction(v) for k, v in coeffs.items()}
    assert rep.ok


def test_random_coefficients_are_reproducible_and_nonzero():
    a = random_coefficients([(0,), (2,), (4,)], 3)
    assert a == random_coefficients([(0,), (2,), (4,)], 3)
    assert all(a.values())


def test_determinism_across_workers_and_runs():
    spec = RadonSpec(1, 4, 1, 3)
    n = 2 * CHUNK + 17
    one = gamma_mc((2,), spec, n, seed=11, stream=4).estimate
    again = gamma_mc((2,), spec, n, seed=11, stream=4).estimate
    two = gamma_mc((2,), spec, n, seed=11, stream=4, workers=2).estimate
    assert one == again == two
    other = gamma_mc((2,), spec, n, seed=12, stream=4).estimate
    assert other != one


def test_mc_estimate_helpers():
    e = MCEstimate(1.0, 0.0, 10)
    assert e.agrees(1) and not e.agrees(2)
    assert MCEstimate(1.0, 0.1, 10).zscore(Fraction(8, 10)) == pytest.approx(2)
    assert e.as_dict() == {"mean": 1.0, "stderr": 0.0, "samples": 10}
