#!/usr/bin/env python3
"""Time the trajectory kernel on its numba and numpy paths.

Usage:
    python benchmarks/bench_kernels.py [--sizes 16 64 256] [--steps 100]
                                       [--repeats 5]

Builds a representative two-operator mixed-unitary search channel per
size and reports the best-of-N wall time for iterating it, for both
kernel implementations.
"""

import argparse
import time

import numpy as np

from noisy_grover import kernels
from noisy_grover.noise import chi_star
from noisy_grover.search import SearchInstance, build_search_channel, uniform_state


def best_time(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[16, 64, 256])
    parser.add_argument("--steps", type=int, default=100)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print(f"numba available: {kernels.HAS_NUMBA}   active backend: {kernels.backend()}")
    print(f"{'n':>5} {'steps':>6} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>8}")

    for n in args.sizes:
        channel = build_search_channel(SearchInstance(n=n, w=0, chi=chi_star(1))).kraus
        ops = np.stack(channel.operators)
        ops_dag = np.ascontiguousarray(ops.conj().transpose(0, 2, 1))
        weights = np.asarray(channel.weights)
        rho = uniform_state(n)

        t_numpy = best_time(
            lambda: kernels._iterate_numpy(ops, ops_dag, weights, rho, args.steps),
            args.repeats,
        )
        if kernels.HAS_NUMBA:
            kernels._iterate_numba(ops, ops_dag, weights, rho, 1)  # warm the JIT
            t_numba = best_time(
                lambda: kernels._iterate_numba(ops, ops_dag, weights, rho, args.steps),
                args.repeats,
            )
            speedup = f"{t_numpy / t_numba:7.2f}x"
            numba_ms = f"{t_numba * 1e3:12.2f}"
        else:
            numba_ms, speedup = f"{'n/a':>12}", f"{'n/a':>8}"
        print(f"{n:>5} {args.steps:>6} {t_numpy * 1e3:12.2f} {numba_ms} {speedup}")


if __name__ == "__main__":
    main()
