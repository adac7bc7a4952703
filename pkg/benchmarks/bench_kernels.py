#!/usr/bin/env python3
"""Timing comparison of the compiled kernel core against the numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py

Covers the two hot paths: batched three-term recurrence propagation (the
inner loop of every grid sweep and quadrature) and the implicit-shift QL
eigensolver.
"""

import time

import numpy as np

from jacobiweyl._core import fallback

try:
    from jacobiweyl._core import _corekernels as compiled
except ImportError:
    compiled = None


def best_of(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_propagation(backend, zs, a, b):
    return best_of(lambda: backend.propagate_grid(a, b, zs, 0.0, 1.0, True))


def bench_eigen(backend, d, e, repeats=3):
    return best_of(lambda: backend.tridiag_eigen(d, e, True), repeats)


def main():
    rng = np.random.default_rng(0)
    rows = []

    ns = 64
    a = rng.uniform(0.5, 2.0, size=ns - 1)
    b = np.concatenate([[0.0], rng.uniform(-1, 1, size=ns - 2), [0.0]])
    for label, zs in [
        ("propagate 4096 real z, 64 sites", rng.uniform(-3, 3, 4096)),
        ("propagate 4096 complex z, 64 sites",
         rng.uniform(-3, 3, 4096) + 1j * rng.uniform(0.1, 2, 4096)),
    ]:
        t_py = bench_propagation(fallback, zs, a, b)
        t_c = bench_propagation(compiled, zs, a, b) if compiled else float("nan")
        rows.append((label, t_py, t_c))

    n = 150
    d = rng.uniform(-1, 1, size=n)
    e = rng.uniform(0.5, 2.0, size=n - 1)
    t_py = bench_eigen(fallback, d, e)
    t_c = bench_eigen(compiled, d, e) if compiled else float("nan")
    rows.append((f"QL eigensolver with vectors, n={n}", t_py, t_c))

    print(f"{'workload':45s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}")
    for label, t_py, t_c in rows:
        speed = t_py / t_c if t_c == t_c and t_c > 0 else float("nan")
        print(f"{label:45s} {t_py * 1e3:9.2f}ms {t_c * 1e3:9.2f}ms {speed:7.1f}x")
    if compiled is None:
        print("\ncompiled core not built; showing fallback only")


if __name__ == "__main__":
    main()
