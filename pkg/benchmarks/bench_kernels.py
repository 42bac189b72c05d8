"""Compiled kernels vs the pure-Python fallback.

    python3 benchmarks/bench_kernels.py            # micro kernels + end-to-end
    python3 benchmarks/bench_kernels.py --quick    # fewer repeats

Micro benchmarks call both backends in-process on the same packed inputs.
The end-to-end rows time one operator matrix in a fresh interpreter, once
with the default backend and once with CAPELLI_PURE_PYTHON=1.
"""

import argparse
import os
import subprocess
import sys
import timeit

from capelli.exactcore import kernels
from capelli.exactcore.kernels import _kernels_py
from capelli.exactcore.poly import guard_for, shifts_for
from capelli.frames import CoordinateFrame

END_TO_END = [
    ("operator matrix (1,5,1,m=2)", "from capelli.ktypes import build_equivariant_space as b; from capelli.diffop import operator_matrix as o; o(b(1,5,1,2))"),
    ("operator matrix (2,3,1,m=2)", "from capelli.ktypes import build_equivariant_space as b; from capelli.diffop import operator_matrix as o; o(b(2,3,1,2))"),
    ("operator matrix (1,4,2,m=1)", "from capelli.ktypes import build_equivariant_space as b; from capelli.diffop import operator_matrix as o; o(b(1,4,2,1), method='pointwise')"),
]


def micro_cases():
    frame = CoordinateFrame(1, 4, 2)
    psi = frame.psi
    p2 = (psi * psi).packed
    a, b = psi.packed, (psi + frame.psi_partials[0]).packed
    keep = set(list(_kernels_py.mul(p2, a))[::3])
    sh = shifts_for(frame.nvars)
    sym = frame.laplace_symbol
    op = []
    for key, c in sym.packed.items():
        supp = [(s, (key >> s) & _kernels_py.VALUE_MASK) for s in sh]
        op.append((key, c, [(s, e) for s, e in supp if e]))
    guard = guard_for(frame.nvars)
    pt = list(range(1, frame.nvars + 1))
    return [
        ("mul  Psi^2 * Psi", lambda k: k.mul(p2, a)),
        ("mul_trunc (1/3 of keys)", lambda k: k.mul_trunc(p2, a, keep)),
        ("add", lambda k: k.add(p2, b, 3)),
        ("deriv", lambda k: k.deriv(p2, sh[0])),
        ("apply_diffop L(Psi^2)", lambda k: k.apply_diffop(op, p2, guard)),
        ("evaluate", lambda k: k.evaluate(p2, sh, pt)),
    ]


def best(fn, number, repeat):
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def run_micro(repeat):
    if not kernels.compiled_available():
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation` first")
        return
    comp = kernels.backend("compiled")
    print(f"{'kernel':28s} {'python ms':>10s} {'compiled ms':>12s} {'speedup':>8s}")
    for name, call in micro_cases():
        assert call(comp) == call(_kernels_py), name
        tp = best(lambda: call(_kernels_py), 3, repeat)
        tc = best(lambda: call(comp), 3, repeat)
        print(f"{name:28s} {tp * 1e3:10.2f} {tc * 1e3:12.2f} {tp / tc:8.1f}x")


def run_end_to_end(repeat):
    print(f"\n{'end to end':28s} {'python s':>10s} {'compiled s':>12s} {'speedup':>8s}")
    for name, code in END_TO_END:
        times = {}
        for label, extra in (("python", {"CAPELLI_PURE_PYTHON": "1"}), ("compiled", {})):
            env = dict(os.environ, **extra)
            stmt = f"import time; t=time.perf_counter(); {code}; print(time.perf_counter()-t)"
            runs = [float(subprocess.run([sys.executable, "-c", stmt], env=env, capture_output=True, text=True,
                                         check=True).stdout) for _ in range(repeat)]
            times[label] = min(runs)
        print(f"{name:28s} {times['python']:10.2f} {times['compiled']:12.2f} {times['python'] / times['compiled']:8.1f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    print(f"default backend: {kernels.IMPLEMENTATION}\n")
    run_micro(3 if args.quick else 7)
    run_end_to_end(1 if args.quick else 3)


if __name__ == "__main__":
    main()
