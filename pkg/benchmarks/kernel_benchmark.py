#!/usr/bin/env python3
"""Benchmark the compiled gate kernels against the pure-numpy fallback.

Times a fixed random sequence of single-site and two-site unitary
applications plus expectation evaluations, per lattice size, per backend.

    python3 benchmarks/kernel_benchmark.py --min-sites 6 --max-sites 14
"""

import argparse
import time

import numpy as np

from tslattice._kernels import _pykernels, available_backends

try:
    from tslattice._kernels import _cykernels
except ImportError:
    _cykernels = None


def random_unitary(dim, rng):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(m)
    return np.ascontiguousarray(q * (np.diag(r) / np.abs(np.diag(r))))


def make_workload(n, n_gates, rng):
    ops = []
    for k in range(n_gates):
        if k % 3 == 2 and n >= 2:
            a, b = rng.choice(n, size=2, replace=False)
            ops.append(("2q", random_unitary(4, rng), int(a), int(b)))
        else:
            ops.append(("1q", random_unitary(2, rng), int(rng.integers(n)), -1))
    h = random_unitary(2, rng)
    h = h + h.conj().T
    return ops, h


def run_workload(kernels, amps, ops, h, n):
    out = amps
    for kind, m, a, b in ops:
        if kind == "1q":
            out = kernels.apply_1q(out, m, a, n)
        else:
            out = kernels.apply_2q(out, m, a, b, n)
        kernels.expect_1q(out, h, a, n)
    return out


def bench(kernels, n, ops, h, repeats):
    rng = np.random.default_rng(0)
    amps = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    amps = np.ascontiguousarray(amps / np.linalg.norm(amps))
    run_workload(kernels, amps, ops, h, n)  # warm up
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        run_workload(kernels, amps, ops, h, n)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--min-sites", type=int, default=6)
    parser.add_argument("--max-sites", type=int, default=14)
    parser.add_argument("--gates", type=int, default=300, help="gates per workload")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print(f"available backends: {', '.join(available_backends())}")
    print(f"workload: {args.gates} gates (2:1 single:two site) + expectations, best of {args.repeats}")
    header = f"{'sites':>5} {'dim':>6} {'python (ms)':>12}"
    if _cykernels is not None:
        header += f" {'cython (ms)':>12} {'speedup':>8}"
    print(header)
    for n in range(args.min_sites, args.max_sites + 1):
        rng = np.random.default_rng(n)
        ops, h = make_workload(n, args.gates, rng)
        t_py = bench(_pykernels, n, ops, h, args.repeats)
        line = f"{n:>5} {2**n:>6} {1e3 * t_py:>12.3f}"
        if _cykernels is not None:
            t_cy = bench(_cykernels, n, ops, h, args.repeats)
            line += f" {1e3 * t_cy:>12.3f} {t_py / t_cy:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
