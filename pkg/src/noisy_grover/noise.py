"""The chi-parametrized noise model.

A pi/4 rotation of the search qubit is corrupted by a two-level
environment coupled with strength chi >= 0 through
H = (pi/4) sigma_y (x) 1 + (chi/2)(1 - sigma_z) (x) sigma_y.
This module provides two independent constructions of the resulting
two-operator Kraus channel (a closed form, and extraction from the
exponentiated Hamiltonian), the scalar functions mu, delta, psi that
parametrize them, the nearest-unitary preconditioning pair, and the
magic strengths at which the preconditioned channel becomes unitary.

The two constructions disagree as maps for every chi (most visibly at
chi = 0, where the closed form gives the identity channel while the
Hamiltonian gives the pi/4 rotation).  Both are kept exactly as
defined; nothing is silently corrected.  channel_choi_distance quantifies the gap and the
verification layer records it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import KrausChannel
from .errors import Indeterminate
from .linalg import kron, matexp_i_hermitian, partial_trace_env, polar_unitary_factor
from .tolerances import PSI_INDETERMINATE_ATOL

__all__ = [
    "PAULI_Y",
    "PAULI_Z",
    "rotation_y",
    "ScalarProfile",
    "scalar_profile",
    "closed_form_kraus",
    "hamiltonian_kraus",
    "nearest_unitary_pair",
    "nearest_unitary_oracle",
    "chi_star",
    "psi_zero_scan",
]

PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_ID2 = np.eye(2, dtype=complex)


def _require_nonnegative(chi: float) -> float:
    chi = float(chi)
    if chi < 0.0 or not math.isfinite(chi):
        raise ValueError(f"noise strength must be finite and >= 0, got {chi}")
    return chi


def rotation_y(angle: float) -> np.ndarray:
    """exp(i * angle * sigma_y) in closed form."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, s], [-s, c]], dtype=complex)


@dataclass(frozen=True)
class ScalarProfile:
    """The three scalar functions of chi that shape the noise channel.

    mu = sqrt(chi^2/4 + pi^2/16)   (always >= pi/4)
    delta = sin(mu) / mu
    psi in [0, pi/2] solving [cos^2 mu + (chi^2/4) delta^2] cos^2 psi = cos^2 mu
    """

    chi: float
    mu: float
    delta: float
    psi: float


def scalar_profile(chi: float) -> ScalarProfile:
    """Evaluate mu, delta and the preconditioning angle psi at chi.

    psi is taken on the principal non-negative branch [0, pi/2], computed
    as atan2(|chi*delta/2|, |cos mu|) which satisfies the defining
    relation exactly and degrades gracefully near the magic strengths
    where delta crosses zero.
    """
    chi = _require_nonnegative(chi)
    mu = math.hypot(chi / 2.0, math.pi / 4.0)
    delta = math.sin(mu) / mu
    cos_mu = math.cos(mu)
    coupling = chi / 2.0 * delta
    if cos_mu**2 < PSI_INDETERMINATE_ATOL and coupling**2 < PSI_INDETERMINATE_ATOL:
        raise Indeterminate(
            f"both cos^2(mu) and (chi^2/4) delta^2 vanish at chi={chi}; psi undefined"
        )
    psi = math.atan2(abs(coupling), abs(cos_mu))
    return ScalarProfile(chi=chi, mu=mu, delta=delta, psi=psi)


def closed_form_kraus(chi: float) -> KrausChannel:
    """The closed-form Kraus pair:

    R0 = (cos(mu) 1 + (i chi/2) delta sigma_y) exp(-i chi/2 sigma_y)
    R1 = (pi/4) delta exp(-i chi/2 sigma_y)

    Completeness follows from cos^2(mu) + mu^2 delta^2 = 1.  Note this
    family reduces to the identity channel at chi = 0, not to the pi/4
    rotation that hamiltonian_kraus produces there.
    """
    chi = _require_nonnegative(chi)
    prof = scalar_profile(chi)
    half_turn = rotation_y(-chi / 2.0)
    r0 = (math.cos(prof.mu) * _ID2 + 0.5j * chi * prof.delta * PAULI_Y) @ half_turn
    r1 = (math.pi / 4.0) * prof.delta * half_turn
    return KrausChannel((r0, r1))


def hamiltonian_kraus(chi: float) -> KrausChannel:
    """Kraus pair extracted from the coupled-system evolution operator.

    Builds the 4x4 generator on system (x) environment, exponentiates,
    and reads off R_i = <i_env| U |0_env>.  Unitarity of U guarantees
    completeness, so this construction is the ground-truth channel for
    every chi.
    """
    chi = _require_nonnegative(chi)
    h = math.pi / 4.0 * kron(PAULI_Y, _ID2) + chi / 2.0 * kron(_ID2 - PAULI_Z, PAULI_Y)
    u = matexp_i_hermitian(h)
    r0 = partial_trace_env(u, 2, 2, 0, 0)
    r1 = partial_trace_env(u, 2, 2, 1, 0)
    return KrausChannel((r0, r1))


def nearest_unitary_pair(chi: float) -> KrausChannel:
    """The preconditioned channel: equal mixture of two y rotations.

    V0 = exp(i (psi - chi/2) sigma_y), V1 = exp(-i chi/2 sigma_y),
    each weighted 1/2.  At chi = 0 and at the magic strengths psi = 0,
    the two rotations coincide and the channel is unitary.
    """
    chi = _require_nonnegative(chi)
    prof = scalar_profile(chi)
    v0 = rotation_y(prof.psi - chi / 2.0)
    v1 = rotation_y(-chi / 2.0)
    return KrausChannel((v0, v1), np.array([0.5, 0.5]))


def nearest_unitary_oracle(chi: float) -> KrausChannel:
    """Polar factors of the closed-form Kraus pair, equal weights 1/2.

    This is the verdict procedure for the preconditioning step: replacing
    each generator by its Frobenius-nearest unitary.  Raises
    DegeneratePolar when an operator is singular (R1 vanishes at the
    magic strengths), in which case the nearest unitary is undefined.
    Compare against nearest_unitary_pair per operator, optimally over a
    global phase; residual branch disagreements are findings, not bugs.
    """
    chi = _require_nonnegative(chi)
    base = closed_form_kraus(chi)
    factors = tuple(polar_unitary_factor(k) for k in base.operators)
    return KrausChannel(factors, np.array([0.5, 0.5]))


def chi_star(n: int) -> float:
    """The n-th magic noise strength pi * sqrt(4 n^2 - 1/4), n >= 1.

    At these values mu = n*pi exactly, delta = 0, and psi = 0, so the
    preconditioned search channel collapses to a single unitary.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"index must be >= 1, got {n}")
    return math.pi * math.sqrt(4.0 * n * n - 0.25)


def psi_zero_scan(
    chi_max: float = 13.0, step: float = 1e-3, threshold: float = 1e-2
) -> np.ndarray:
    """Locate zeros of psi(chi) on a grid, independently of chi_star.

    Returns grid points that are local minima of psi with value below
    threshold.  Serves as the root-finding oracle that double-checks the
    closed form for the magic strengths.
    """
    grid = np.arange(0.0, chi_max + step / 2.0, step)
    mu = np.hypot(grid / 2.0, math.pi / 4.0)
    delta = np.sin(mu) / mu
    psi = np.arctan2(np.abs(grid / 2.0 * delta), np.abs(np.cos(mu)))
    padded = np.concatenate(([np.inf], psi, [np.inf]))
    is_min = (padded[1:-1] < padded[:-2]) & (padded[1:-1] <= padded[2:])
    return grid[is_min & (psi < threshold)]
