"""The compiled kernels and the pure-Python fallback must agree exactly."""

import os

import pytest
from hypothesis import given
from hypothesis import strategies as st

from capelli.exactcore import kernels
from capelli.exactcore.kernels import _kernels_py
from capelli.exactcore.poly import guard_for, pack, shifts_for

NV = 4

compiled = pytest.mark.skipif(not kernels.compiled_available(), reason="compiled kernels not built")

coeffs = st.one_of(st.integers(-50, 50), st.fractions(min_value=-5, max_value=5, max_denominator=7))


@st.composite
def packed(draw):
    out = {}
    for _ in range(draw(st.integers(0, 8))):
        key = pack([draw(st.integers(0, 4)) for _ in range(NV)], NV)
        c = draw(coeffs)
        if c:
            out[key] = c
    return out


def backends():
    out = [_kernels_py]
    if kernels.compiled_available():
        out.append(kernels.backend("compiled"))
    return out


@given(packed(), packed())
def test_mul_add_agree(a, b):
    ref = _kernels_py
    for k in backends():
        assert k.mul(a, b) == ref.mul(a, b)
        assert k.add(a, b, 3) == ref.add(a, b, 3)
        assert k.scale(a, 5) == ref.scale(a, 5)


@given(packed(), packed())
def test_truncated_product_is_restriction(a, b):
    full = _kernels_py.mul(a, b)
    keep = set(list(full)[::2])
    want = {k: v for k, v in full.items() if k in keep}
    for k in backends():
        assert k.mul_trunc(a, b, keep) == want


@given(packed(), st.integers(0, NV - 1))
def test_deriv_agree(a, v):
    sh = shifts_for(NV)[v]
    for k in backends():
        assert k.deriv(a, sh) == _kernels_py.deriv(a, sh)


@given(packed(), packed())
def test_apply_diffop_agree(op_poly, a):
    sh = shifts_for(NV)
    op = []
    for key, c in op_poly.items():
        supp = [(sh[i], (key >> sh[i]) & _kernels_py.VALUE_MASK) for i in range(NV)]
        op.append((key, c, [(s, e) for s, e in supp if e]))
    g = guard_for(NV)
    for k in backends():
        assert k.apply_diffop(op, a, g) == _kernels_py.apply_diffop(op, a, g)


@given(packed(), st.lists(st.integers(-3, 3), min_size=NV, max_size=NV))
def test_evaluate_agree(a, pt):
    for k in backends():
        assert k.evaluate(a, shifts_for(NV), pt) == _kernels_py.evaluate(a, shifts_for(NV), pt)


@compiled
@pytest.mark.skipif(os.environ.get("CAPELLI_PURE_PYTHON") == "1", reason="fallback forced")
def test_compiled_backend_selected_by_default():
    assert kernels.IMPLEMENTATION == "cython"


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.backend("fortran")
