"""Compare the compiled and pure-Python kernels on representative workloads.

Usage: python benchmarks/bench_kernels.py [--repeat R]
"""

import argparse
import random
import timeit

from levelzero import _pykernels
from levelzero.classes import wf_minus_one
from levelzero.rootdatum import build
from levelzero.weyl import WeylGroup

try:
    from levelzero import _ckernels
except ImportError:
    _ckernels = None


def workloads():
    W = WeylGroup(build("Sp", 3))
    flat = W.flat
    k, n = len(W), W.rank
    rng = random.Random(0)
    vecs = [[rng.randrange(24) for _ in range(n)] for _ in range(200)]
    M = [x for r in wf_minus_one(W, 5, 3) for x in r]
    us = [rng.randrange(20000) for _ in range(60000)]
    vs = [rng.randrange(20000) for _ in range(60000)]
    return {
        "orbit_min (48 elements x 200 vectors)": lambda m: [m.orbit_min(flat, k, n, v, 24) for v in vecs],
        "stabilizer (48 elements x 200 vectors)": lambda m: [m.stabilizer(flat, k, n, v, 24) for v in vecs],
        "fixed_grid (rank 3, N = 24)": lambda m: m.fixed_grid(M, n, 24),
        "uf_components (20000 nodes, 60000 edges)": lambda m: m.uf_components(20000, us, vs),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    print(f"{'workload':45s} " + " ".join(f"{name:>10s}" for name, _ in backends) + "   speedup")
    for label, fn in workloads().items():
        results = [fn(mod) for _, mod in backends]
        if any(r != results[0] for r in results):
            raise SystemExit(f"backends disagree on {label}")
        times = [min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)) for _, mod in backends]
        speed = f"{times[0] / times[1]:8.1f}x" if len(times) > 1 else "      n/a"
        print(f"{label:45s} " + " ".join(f"{t * 1000:9.1f}ms" for t in times) + f" {speed}")
    if _ckernels is None:
        print("compiled kernels not built; install with a C compiler and Cython to compare")


if __name__ == "__main__":
    main()
