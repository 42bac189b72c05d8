"""Pure-Python sparse polynomial kernels.

A monomial in ``nvars`` variables is packed into one Python int with
``BITS``-wide fields, variable 0 in the most significant field so that integer
comparison of packed keys is lexicographic order.  The top bit of every field
is a guard bit that stays clear in valid monomials; ``(b | G) - a`` keeps all
guard bits set iff ``b >= a`` componentwise.

Every kernel takes and returns plain ``dict[int, coeff]`` objects.  Coefficients
may be any exact scalar supporting ``+`` and ``*`` (int, Fraction,
GaussRational).  Returned dicts never contain zero coefficients.
"""

BITS = 12
GUARD_BIT = 1 << (BITS - 1)
VALUE_MASK = GUARD_BIT - 1
MAX_EXP = VALUE_MASK

IMPLEMENTATION = "python"


def guard_mask(nvars):
    g = 0
    for i in range(nvars):
        g |= GUARD_BIT << (BITS * i)
    return g


def _strip(d):
    return {k: v for k, v in d.items() if v}


def add(a, b, cb=1):
    """Return ``a + cb*b``."""
    out = dict(a)
    get = out.get
    if cb == 1:
        for k, v in b.items():
            out[k] = get(k, 0) + v
    else:
        for k, v in b.items():
            out[k] = get(k, 0) + cb * v
    return _strip(out)


def scale(a, c):
    if not c:
        return {}
    return _strip({k: c * v for k, v in a.items()})


def mul(a, b):
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    bitems = list(b.items())
    for ka, ca in a.items():
        for kb, cb in bitems:
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
    return _strip(out)


def mul_trunc(a, b, keep):
    """Product restricted to monomial keys in the set ``keep``."""
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    bitems = list(b.items())
    for ka, ca in a.items():
        for kb, cb in bitems:
            k = ka + kb
            if k in keep:
                out[k] = get(k, 0) + ca * cb
    return _strip(out)


def mul_term(a, key, c):
    """Multiply ``a`` by the single term ``c*x^key``."""
    return _strip({k + key: c * v for k, v in a.items()})


def deriv(a, shift):
    """Partial derivative in the variable stored at bit offset ``shift``."""
    out = {}
    one = 1 << shift
    for k, v in a.items():
        e = (k >> shift) & VALUE_MASK
        if e:
            out[k - one] = v * e
    return out


def apply_diffop(op, a, guard):
    """Apply a constant-coefficient differential operator.

    ``op`` is a list of ``(alpha_key, coeff, support)`` where ``support`` lists
    ``(shift, order)`` pairs of the multi-index ``alpha``.
    """
    out = {}
    get = out.get
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
            k = r ^ guard
            out[k] = get(k, 0) + f
    return _strip(out)


def evaluate(a, shifts, point, one=1):
    """Evaluate at ``point`` (sequence aligned with ``shifts``)."""
    cache = [{0: one} for _ in shifts]
    total = 0
    nv = len(shifts)
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

