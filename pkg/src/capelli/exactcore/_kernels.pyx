# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse polynomial kernels; same API and packing as ``_kernels_py``."""

from cpython.dict cimport PyDict_GetItem, PyDict_SetItem
from cpython.object cimport PyObject

DEF _BITS = 12

BITS = _BITS
GUARD_BIT = 1 << (_BITS - 1)
VALUE_MASK = GUARD_BIT - 1
MAX_EXP = VALUE_MASK

IMPLEMENTATION = "cython"


def guard_mask(int nvars):
    g = 0
    cdef int i
    for i in range(nvars):
        g |= GUARD_BIT << (_BITS * i)
    return g


cdef dict _strip(dict d):
    return {k: v for k, v in d.items() if v}


cdef inline void _acc(dict out, object k, object v):
    cdef PyObject* old = PyDict_GetItem(out, k)
    if old is NULL:
        PyDict_SetItem(out, k, v)
    else:
        PyDict_SetItem(out, k, <object>old + v)


def add(dict a, dict b, cb=1):
    """Return ``a + cb*b``."""
    cdef dict out = dict(a)
    if cb == 1:
        for k, v in b.items():
            _acc(out, k, v)
    else:
        for k, v in b.items():
            _acc(out, k, cb * v)
    return _strip(out)


def scale(dict a, c):
    if not c:
        return {}
    return _strip({k: c * v for k, v in a.items()})


def mul(dict a, dict b):
    if len(a) > len(b):
        a, b = b, a
    cdef dict out = {}
    cdef list bkeys = list(b.keys())
    cdef list bvals = list(b.values())
    cdef Py_ssize_t j, nb = len(bkeys)
    cdef object ka, ca
    for ka, ca in a.items():
        for j in range(nb):
            _acc(out, ka + bkeys[j], ca * bvals[j])
    return _strip(out)


def mul_trunc(dict a, dict b, set keep):
    if len(a) > len(b):
        a, b = b, a
    cdef dict out = {}
    cdef list bkeys = list(b.keys())
    cdef list bvals = list(b.values())
    cdef Py_ssize_t j, nb = len(bkeys)
    cdef object ka, ca, k
    for ka, ca in a.items():
        for j in range(nb):
            k = ka + bkeys[j]
            if k in keep:
                _acc(out, k, ca * bvals[j])
    return _strip(out)


def mul_term(dict a, key, c):
    return _strip({k + key: c * v for k, v in a.items()})


def deriv(dict a, int shift):
    cdef dict out = {}
    one = (<object>1) << shift
    cdef long e
    for k, v in a.items():
        e = (k >> shift) & VALUE_MASK
        if e:
            out[k - one] = v * e
    return out


def apply_diffop(list op, dict a, guard):
    cdef dict out = {}
    cdef long be, j, e
    cdef int sh
    for kb, cb in a.items():
        t = kb | guard
        for ka, c, supp in op:
            r = t - ka
            if r & guard != guard:
                continue
            f = c * cb
            for sh, e in supp:
                be = (kb >> sh) & VALUE_MASK
                for j in range(e):
                    f *= be - j
            _acc(out, r ^ guard, f)
    return _strip(out)


def evaluate(dict a, list shifts, list point, one=1):
    cdef Py_ssize_t nv = len(shifts), i
    cdef list cache = [{0: one} for _ in range(nv)]
    cdef long e
    cdef dict ci
    total = 0
    for k, c in a.items():
        val = c
        for i in range(nv):
            e = (k >> shifts[i]) & VALUE_MASK
            if e:
                ci = cache[i]
                p = ci.get(e)
                if p is None:
                    p = point[i] ** e
                    ci[e] = p
                val = val * p
        total = total + val
    return total
