"""Compare the numba and numpy kernel backends.

Runs the layout kernels (tile transpose, dense and sparse GF(2) multiply)
and the full pipeline on layered random circuits under each backend, after
one warm-up call so JIT compilation is not counted.  Prints CSV.

    python benchmarks/bench_backends.py --n 50 100 --shots 10000
"""

import argparse
import sys
import time

import numpy as np

from symstab import kernels
from symstab.bench import layered_circuit, time_pipeline
from symstab.bitmatrix import COLUMN, ROW, TiledBitMatrix, gf2_multiply, gf2_multiply_sparse


def best_of(fn, repeats):
    fn()  # warm-up (JIT, caches)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(size, rng):
    dense = rng.integers(0, 2, size=(size, size), dtype=np.uint8)
    m = TiledBitMatrix.from_dense(dense, COLUMN)
    a = TiledBitMatrix.from_dense(rng.integers(0, 2, size=(size, size), dtype=np.uint8), ROW)
    b = TiledBitMatrix.from_dense(rng.integers(0, 2, size=(size, size), dtype=np.uint8), ROW)
    rows = [tuple(np.flatnonzero(rng.random(size) < 0.02)) for _ in range(size)]

    def transpose_pair():
        m.local_transpose()
        m.local_transpose()

    return {
        "transpose_x2": transpose_pair,
        "dense_multiply": lambda: gf2_multiply(a, b),
        "sparse_multiply": lambda: gf2_multiply_sparse(rows, b),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=2048, help="matrix side for kernel timings")
    parser.add_argument("--n", type=int, nargs="+", default=[50, 100])
    parser.add_argument("--family", nargs="+", default=["a", "c"])
    parser.add_argument("--shots", type=int, default=10_000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args(argv)

    backends = sorted(kernels.BACKENDS)
    if "numba" not in backends:
        print("numba not importable; only the numpy backend will be timed", file=sys.stderr)
    print("case,backend,seconds")
    original = kernels.active()
    try:
        for name in backends:
            kernels.use(name)
            cases = kernel_cases(args.size, np.random.default_rng(0))
            for case, fn in cases.items():
                print(f"{case}[{args.size}],{name},{best_of(fn, args.repeats):.6f}", flush=True)
            for fam in args.family:
                for n in args.n:
                    circuit = layered_circuit(fam, n, seed=0)
                    time_pipeline(circuit[: 4 * n // 10 + 1], 64)  # warm-up
                    t = time_pipeline(circuit, args.shots, repeats=args.repeats)
                    print(f"init[{fam}{n}],{name},{t.init_seconds:.6f}")
                    print(f"sampling[{fam}{n}],{name},{t.sampling_seconds:.6f}", flush=True)
    finally:
        kernels.use(original)


if __name__ == "__main__":
    main()
