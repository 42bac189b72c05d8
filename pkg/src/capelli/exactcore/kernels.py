"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``CAPELLI_PURE_PYTHON=1`` to force the fallback (used by the benchmark and
by the test that checks both backends agree).
"""

import os

from . import _kernels_py

_compiled = None
if os.environ.get("CAPELLI_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

_impl = _compiled if _compiled is not None else _kernels_py

BITS = _kernels_py.BITS
GUARD_BIT = _kernels_py.GUARD_BIT
VALUE_MASK = _kernels_py.VALUE_MASK
MAX_EXP = _kernels_py.MAX_EXP
guard_mask = _kernels_py.guard_mask

add = _impl.add
scale = _impl.scale
mul = _impl.mul
mul_trunc = _impl.mul_trunc
mul_term = _impl.mul_term
deriv = _impl.deriv
apply_diffop = _impl.apply_diffop
evaluate = _impl.evaluate

IMPLEMENTATION = _impl.IMPLEMENTATION


def backend(name: str):
    """Return the kernel module called ``name`` ('python' or 'compiled')."""
    if name == "python":
        return _kernels_py
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(name)


def compiled_available() -> bool:
    return _compiled is not None
