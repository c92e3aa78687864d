"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from hardylab import _core_py

try:
    from hardylab import _core
except ImportError:
    _core = None


def cases(rng):
    def herm(n):
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        return (m + m.conj().T) / 2

    def vecs(n, k):
        return rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))

    h4, h16 = herm(4), herm(16)
    z4, z16 = vecs(4, 3).T.copy(), vecs(16, 10).T.copy()
    t4, t16 = vecs(4, 1).T.copy(), vecs(16, 2).T.copy()
    return [
        ("jacobi_eigh 4x4", "jacobi_eigh", (h4,)),
        ("jacobi_eigh 16x16", "jacobi_eigh", (h16,)),
        ("orthonormalize 4x3", "orthonormalize", (vecs(4, 3).T.copy(),)),
        ("orthonormalize 16x10", "orthonormalize", (vecs(16, 10).T.copy(),)),
        ("constrained_max d=4", "constrained_max", (z4, t4)),
        ("constrained_max d=16", "constrained_max", (z16, t16)),
    ]


def bench(fn, args, repeat):
    n, _ = timeit.Timer(lambda: fn(*args)).autorange()
    best = min(timeit.repeat(lambda: fn(*args), number=n, repeat=repeat))
    return best / n


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _core is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation` first")
    rng = np.random.default_rng(0)
    print(f"{'kernel':24s} {'python (us)':>12s} {'cython (us)':>12s} {'speedup':>8s}")
    for label, name, fargs in cases(rng):
        tp = bench(getattr(_core_py, name), fargs, args.repeat)
        if _core is None:
            print(f"{label:24s} {tp * 1e6:12.1f} {'-':>12s} {'-':>8s}")
            continue
        tc = bench(getattr(_core, name), fargs, args.repeat)
        print(f"{label:24s} {tp * 1e6:12.1f} {tc * 1e6:12.1f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
