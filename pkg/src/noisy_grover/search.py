"""The N-item search: reflections, plane embedding, the mixed channel.

One iteration of the noisy search is the channel
t(rho) = 1/2 sum_i (V~_i I_s V~_i^dag I_w) rho (...)^dag, where I_s and
I_w reflect about the uniform state and the target, and V~_i embeds the
two preconditioning rotations into the plane spanned by the target |w>
and the unit component |r> of |s> orthogonal to it.  The embedding acts
as the 2x2 rotation on the ordered basis {|w>, |r>} and as the identity
on the orthogonal complement; with it, the chi = 0 limit reproduces the
textbook two-reflection iteration exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import KrausChannel, apply_channel, compose_channels
from .errors import (
    DegeneratePlane,
    DimensionMismatch,
    InvalidDensityMatrix,
    NotNormalized,
)
from .kernels import iterate_states
from .linalg import as_complex_matrix, hermiticity_defect, unitarity_defect
from .noise import nearest_unitary_pair
from .tolerances import (
    HERMITICITY_ATOL,
    POSITIVITY_ATOL,
    TRACE_ATOL,
    UNITARITY_ATOL,
)

__all__ = [
    "SearchInstance",
    "SearchChannel",
    "uniform_state",
    "target_state",
    "reflection",
    "plane_basis",
    "embed_plane_rotation",
    "build_search_channel",
    "apply",
    "iterate",
    "compose_channels",
    "success_probability",
    "ideal_grover_probability",
    "check_density_matrix",
]


@dataclass(frozen=True)
class SearchInstance:
    """Database size, target index, and environment coupling strength."""

    n: int
    w: int
    chi: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"database size must be >= 2, got {self.n}")
        if not 0 <= self.w < self.n:
            raise ValueError(f"target index {self.w} out of range [0, {self.n})")
        if self.chi < 0:
            raise ValueError(f"noise strength must be >= 0, got {self.chi}")


@dataclass(eq=False)
class SearchChannel:
    """A search iteration: mixed-unitary Kraus channel plus its instance."""

    instance: SearchInstance
    kraus: KrausChannel


def uniform_state(n: int) -> np.ndarray:
    """|s><s| for the uniform superposition; every entry is 1/n."""
    if n < 2:
        raise ValueError(f"database size must be >= 2, got {n}")
    return np.full((n, n), 1.0 / n, dtype=complex)


def target_state(n: int, w: int) -> np.ndarray:
    """The projector |w><w|."""
    rho = np.zeros((n, n), dtype=complex)
    rho[w, w] = 1.0
    return rho


def reflection(v) -> np.ndarray:
    """1 - 2|v><v| for a unit vector v: Hermitian, unitary, involutory."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > UNITARITY_ATOL:
        raise NotNormalized(f"vector norm {norm} is not 1 within {UNITARITY_ATOL:.1e}")
    return np.eye(v.size, dtype=complex) - 2.0 * np.outer(v, v.conj())


def plane_basis(inst: SearchInstance) -> np.ndarray:
    """Columns {|w>, |r>}: the target and the normalized rest of |s>.

    Returns an (n, 2) matrix with orthonormal real columns spanning the
    invariant search plane.
    """
    if inst.n < 2:
        raise DegeneratePlane("search plane needs n >= 2")
    basis = np.zeros((inst.n, 2), dtype=complex)
    basis[inst.w, 0] = 1.0
    rest = np.full(inst.n, 1.0 / np.sqrt(inst.n - 1.0))
    rest[inst.w] = 0.0
    basis[:, 1] = rest
    return basis


def embed_plane_rotation(v2, inst: SearchInstance) -> np.ndarray:
    """Lift a 2x2 unitary to n dimensions on the ordered basis {|w>, |r>}.

    Identity on the orthogonal complement of the search plane.
    """
    v2 = as_complex_matrix(v2)
    if v2.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 matrix, got {v2.shape}")
    if unitarity_defect(v2) > UNITARITY_ATOL:
        raise DimensionMismatch("plane rotation must be unitary")
    p = plane_basis(inst)
    return np.eye(inst.n, dtype=complex) + p @ (v2 - np.eye(2)) @ p.conj().T


def build_search_channel(inst: SearchInstance) -> SearchChannel:
    """Assemble t with Kraus operators V~_i I_s V~_i^dag I_w, weights 1/2.

    Each operator is unitary (a product of unitaries), so t is
    mixed-unitary and hence unital.
    """
    pair = nearest_unitary_pair(inst.chi)
    s = np.full(inst.n, 1.0 / np.sqrt(inst.n))
    refl_s = reflection(s)
    e_w = np.zeros(inst.n)
    e_w[inst.w] = 1.0
    refl_w = reflection(e_w)
    ops = []
    for v in pair.operators:
        lifted = embed_plane_rotation(v, inst)
        ops.append(lifted @ refl_s @ lifted.conj().T @ refl_w)
    kraus = KrausChannel(tuple(ops), np.array([0.5, 0.5]))
    return SearchChannel(instance=inst, kraus=kraus)


def _as_kraus(ch) -> KrausChannel:
    return ch.kraus if isinstance(ch, SearchChannel) else ch


def apply(ch, rho: np.ndarray) -> np.ndarray:
    """One application of the channel to a state."""
    return apply_channel(_as_kraus(ch), rho)


def iterate(ch, rho: np.ndarray, m: int) -> np.ndarray:
    """Trajectory [rho, t(rho), ..., t^m(rho)] as an (m+1, n, n) array."""
    if m < 0:
        raise ValueError(f"iteration count must be >= 0, got {m}")
    kraus = _as_kraus(ch)
    rho = as_complex_matrix(rho)
    if rho.shape[0] != kraus.dim:
        raise DimensionMismatch(f"state dim {rho.shape[0]} != channel dim {kraus.dim}")
    ops = np.stack(kraus.operators)
    return iterate_states(ops, kraus.weights, rho, m)


def success_probability(rho: np.ndarray, w: int) -> float:
    """<w| rho |w>: probability that a measurement yields the target."""
    rho = as_complex_matrix(rho)
    if not 0 <= w < rho.shape[0]:
        raise DimensionMismatch(f"target index {w} out of range for dim {rho.shape[0]}")
    return float(rho[w, w].real)


def ideal_grover_probability(n: int, m: int) -> float:
    """Noiseless reference: sin^2((2m+1) arcsin(1/sqrt(n))).

    Closed-form success probability of m two-reflection iterations from
    the uniform state; the chi = 0 channel must match this.
    """
    if n < 2:
        raise ValueError(f"database size must be >= 2, got {n}")
    if m < 0:
        raise ValueError(f"iteration count must be >= 0, got {m}")
    return float(np.sin((2 * m + 1) * np.arcsin(1.0 / np.sqrt(n))) ** 2)


def check_density_matrix(rho: np.ndarray, context: str = "state") -> None:
    """Raise InvalidDensityMatrix unless rho is a valid state.

    Hermitian within HERMITICITY_ATOL, unit trace within TRACE_ATOL,
    eigenvalues >= -POSITIVITY_ATOL.
    """
    rho = as_complex_matrix(rho)
    defect = hermiticity_defect(rho)
    if defect > HERMITICITY_ATOL:
        raise InvalidDensityMatrix(f"{context}: hermiticity defect {defect:.3e}")
    trace_err = abs(np.trace(rho).real - 1.0)
    if trace_err > TRACE_ATOL:
        raise InvalidDensityMatrix(f"{context}: trace deviates by {trace_err:.3e}")
    smallest = float(np.linalg.eigvalsh(rho)[0])
    if smallest < -POSITIVITY_ATOL:
        raise InvalidDensityMatrix(f"{context}: eigenvalue {smallest:.3e} below zero")
