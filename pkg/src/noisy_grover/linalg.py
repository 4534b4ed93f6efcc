"""Dense complex linear algebra on small square matrices.

Everything here is a pure function of ndarray inputs.  Matrix exponentials
go through Hermitian eigendecomposition (exact at these dimensions, no
scaling-and-squaring), polar factors through SVD with a closed-form path
for 2x2 inputs.  Tensor ordering convention: the system is always the
left Kronecker factor and the environment the right one; all environment
indexing below follows that layout.
"""

from __future__ import annotations

import numpy as np

from .errors import DegeneratePolar, DimensionMismatch, NotHermitian
from .tolerances import HERMITICITY_ATOL, SINGULARITY_FLOOR

__all__ = [
    "dagger",
    "as_complex_matrix",
    "hermiticity_defect",
    "require_hermitian",
    "kron",
    "matexp_i_hermitian",
    "polar_unitary_factor",
    "partial_trace_env",
    "eigvals_hermitian",
    "unitarity_defect",
]


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a square complex128 array with finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DimensionMismatch("matrix contains non-finite entries")
    return a


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entry of |m - m^dagger|."""
    return float(np.max(np.abs(m - m.conj().T)))


def require_hermitian(m: np.ndarray, atol: float = HERMITICITY_ATOL) -> None:
    defect = hermiticity_defect(m)
    if defect > atol:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds {atol:.1e}")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, left factor outermost (block structure a_ij * b)."""
    return np.kron(a, b)


def matexp_i_hermitian(h) -> np.ndarray:
    """exp(i*h) for Hermitian h, computed by eigendecomposition.

    The result is unitary to the accuracy of the eigensolver.  Raises
    NotHermitian when h deviates from self-adjointness beyond tolerance.
    """
    h = as_complex_matrix(h)
    require_hermitian(h)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def _polar_unitary_2x2(m: np.ndarray) -> np.ndarray:
    # Closed form: W = m (m^dag m)^{-1/2} using the 2x2 PSD square root
    # sqrt(H) = (H + sqrt(det H) I) / sqrt(tr H + 2 sqrt(det H)).
    h = m.conj().T @ m
    tr = h[0, 0].real + h[1, 1].real
    det = max((h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]).real, 0.0)
    root_det = np.sqrt(det)
    disc = max(tr * tr - 4.0 * det, 0.0)
    smallest_sv = np.sqrt(max((tr - np.sqrt(disc)) / 2.0, 0.0))
    if smallest_sv <= SINGULARITY_FLOOR:
        raise DegeneratePolar(
            f"smallest singular value {smallest_sv:.3e} at or below {SINGULARITY_FLOOR:.1e}"
        )
    sqrt_h = (h + root_det * np.eye(2)) / np.sqrt(tr + 2.0 * root_det)
    det_sqrt_h = sqrt_h[0, 0] * sqrt_h[1, 1] - sqrt_h[0, 1] * sqrt_h[1, 0]
    inv_sqrt_h = (
        np.array([[sqrt_h[1, 1], -sqrt_h[0, 1]], [-sqrt_h[1, 0], sqrt_h[0, 0]]])
        / det_sqrt_h
    )
    return m @ inv_sqrt_h


def polar_unitary_factor(m) -> np.ndarray:
    """Unitary factor W of the polar decomposition m = P W, P >= 0 Hermitian.

    W is the Frobenius-nearest unitary to m.  A numerically singular input
    raises DegeneratePolar rather than silently completing, because the
    nearest unitary is then not unique.
    """
    m = as_complex_matrix(m)
    if m.shape[0] == 2:
        return _polar_unitary_2x2(m)
    u, s, vh = np.linalg.svd(m)
    if s[-1] <= SINGULARITY_FLOOR:
        raise DegeneratePolar(
            f"smallest singular value {s[-1]:.3e} at or below {SINGULARITY_FLOOR:.1e}"
        )
    return u @ vh


def partial_trace_env(
    m, sys_dim: int, env_dim: int, env_row: int, env_col: int
) -> np.ndarray:
    """Environment matrix element <env_row| m |env_col> as a system operator.

    m acts on system (x) environment with the environment as the right
    Kronecker factor; the returned block has shape (sys_dim, sys_dim).
    """
    m = as_complex_matrix(m)
    if m.shape[0] != sys_dim * env_dim:
        raise DimensionMismatch(
            f"matrix dim {m.shape[0]} != sys_dim*env_dim = {sys_dim * env_dim}"
        )
    if not (0 <= env_row < env_dim and 0 <= env_col < env_dim):
        raise DimensionMismatch(
            f"environment indices ({env_row}, {env_col}) out of range for dim {env_dim}"
        )
    return m[env_row::env_dim, env_col::env_dim].copy()


def eigvals_hermitian(m, atol: float = HERMITICITY_ATOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted descending."""
    m = as_complex_matrix(m)
    require_hermitian(m, atol)
    return np.linalg.eigvalsh(m)[::-1].copy()


def unitarity_defect(m: np.ndarray) -> float:
    """Frobenius norm of m^dag m - I."""
    d = m.shape[0]
    return float(np.linalg.norm(m.conj().T @ m - np.eye(d)))
