"""Hot trajectory kernel: repeated Kraus conjugation of one state.

The numba path is used when numba imports cleanly and the environment
variable NOISY_GROVER_NO_NUMBA is unset; otherwise a pure-numpy loop with
identical semantics runs.  benchmarks/bench_kernels.py compares the two.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["iterate_states", "backend", "HAS_NUMBA"]

_DISABLE_ENV = "NOISY_GROVER_NO_NUMBA"

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False


def _iterate_numpy(ops, ops_dag, weights, rho0, m):
    n = rho0.shape[0]
    out = np.empty((m + 1, n, n), dtype=np.complex128)
    out[0] = rho0
    cur = rho0
    for step in range(1, m + 1):
        nxt = np.zeros((n, n), dtype=np.complex128)
        for i in range(ops.shape[0]):
            nxt += weights[i] * (ops[i] @ cur @ ops_dag[i])
        cur = nxt
        out[step] = cur
    return out


if HAS_NUMBA:

    @njit(cache=True)
    def _iterate_numba(ops, ops_dag, weights, rho0, m):  # pragma: no cover - jitted
        k, n, _ = ops.shape
        out = np.empty((m + 1, n, n), dtype=np.complex128)
        out[0] = rho0
        cur = rho0.copy()
        for step in range(1, m + 1):
            nxt = np.zeros((n, n), dtype=np.complex128)
            for i in range(k):
                nxt += weights[i] * (ops[i] @ cur @ ops_dag[i])
            cur = nxt
            out[step] = cur
        return out


def _use_numba() -> bool:
    return HAS_NUMBA and not os.environ.get(_DISABLE_ENV)


def backend() -> str:
    """Name of the kernel implementation the dispatcher would pick now."""
    return "numba" if _use_numba() else "numpy"


def iterate_states(ops, weights, rho0, m: int) -> np.ndarray:
    """Stack [rho, E(rho), ..., E^m(rho)] for E(r) = sum_i w_i K_i r K_i^dag.

    ops is a (k, n, n) complex array of Kraus operators, weights a length-k
    float array.  Returns an (m+1, n, n) complex array.
    """
    ops = np.ascontiguousarray(ops, dtype=np.complex128)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    rho0 = np.ascontiguousarray(rho0, dtype=np.complex128)
    ops_dag = np.ascontiguousarray(ops.conj().transpose(0, 2, 1))
    if _use_numba():
        return _iterate_numba(ops, ops_dag, weights, rho0, m)
    return _iterate_numpy(ops, ops_dag, weights, rho0, m)
