"""Measurable quantities along a search trajectory.

Plane-restricted Bloch vectors, the two fidelity readings (the
half-normalized overlap and the operational success probability), their
closed-form counterparts, von Neumann entropy, and majorization checks.
Closed-form values are carried side by side with simulated ones for
comparison and are never used as the reference: the simulator is the
oracle, the formulas are hypotheses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    LengthMismatch,
    OffPlaneSupport,
    ZeroBlochVector,
)
from .linalg import as_complex_matrix, eigvals_hermitian
from .noise import scalar_profile
from .search import (
    SearchInstance,
    build_search_channel,
    iterate,
    plane_basis,
    uniform_state,
)
from .tolerances import (
    BLOCH_ZERO_ATOL,
    EIGENVALUE_FLOOR,
    MAJORIZATION_ATOL,
    PLANE_RESIDUAL_ATOL,
    PLANE_TRACE_ATOL,
)

__all__ = [
    "BlochVector",
    "FidelityPoint",
    "Phi",
    "TrajectoryReport",
    "bloch_from_density",
    "radial_fidelity",
    "angular_fidelity",
    "phase_terms",
    "closed_form_fidelities",
    "bloch_contraction_factor",
    "entropy",
    "entropy_from_spectrum",
    "majorization_check",
    "trajectory_report",
    "high_precision_bloch_norms",
]

# Full states are kept up to this dimension; larger databases evolve only
# the 2x2 plane block (the dynamics never leaves the plane).
FULL_STATE_LIMIT = 256


@dataclass(frozen=True)
class BlochVector:
    """Plane coordinates (x, z) of a state; the target sits at (0, 1).

    The dynamics is real, so the y component is identically zero and
    omitted.
    """

    x: float
    z: float

    @property
    def norm(self) -> float:
        return math.hypot(self.x, self.z)


@dataclass(frozen=True)
class FidelityPoint:
    """Per-iteration merit figures read off the simulated state."""

    m: int
    f_paper: float
    p_success: float
    cos_gamma: float
    bloch_norm: float


@dataclass(frozen=True)
class Phi:
    """Angle bookkeeping for the closed-form fidelities.

    alpha = arccos(1/sqrt(n)); theta = pi + chi + arcsin(2 sqrt(n-1)/n)
    on the principal arcsin branch; phi_half = m*psi - m*theta + alpha.
    """

    chi: float
    m: int
    n: int
    phi_half: float
    theta: float
    alpha: float


@dataclass(eq=False)
class TrajectoryReport:
    """Everything measured along one trajectory, sequences of length m+1."""

    instance: SearchInstance
    points: list = field(default_factory=list)
    f_closed: list = field(default_factory=list)
    cos_gamma_closed: list = field(default_factory=list)
    entropies: list = field(default_factory=list)
    spectra: list = field(default_factory=list)
    majorized_by_prev: list = field(default_factory=list)
    majorized_by_init: list = field(default_factory=list)


def _plane_block(rho: np.ndarray, inst: SearchInstance) -> np.ndarray:
    """2x2 restriction of rho to the search plane, with support checks."""
    rho = as_complex_matrix(rho)
    if rho.shape[0] != inst.n:
        raise DimensionMismatch(f"state dim {rho.shape[0]} != instance n {inst.n}")
    p = plane_basis(inst)
    block = p.conj().T @ rho @ p
    plane_trace = float(np.trace(block).real)
    residual = float(np.linalg.norm(rho - p @ block @ p.conj().T))
    if plane_trace < 1.0 - PLANE_TRACE_ATOL or residual > PLANE_RESIDUAL_ATOL:
        raise OffPlaneSupport(
            f"plane trace {plane_trace:.9f}, off-plane residual {residual:.3e}"
        )
    return block


def _bloch_of_block(block: np.ndarray) -> BlochVector:
    trace = float(np.trace(block).real)
    block = block / trace
    return BlochVector(
        x=float(2.0 * block[0, 1].real),
        z=float((block[0, 0] - block[1, 1]).real),
    )


def bloch_from_density(rho: np.ndarray, inst: SearchInstance) -> BlochVector:
    """Bloch vector of the trace-renormalized plane block of rho.

    Raises OffPlaneSupport when the state is not (numerically) confined
    to the search plane.
    """
    return _bloch_of_block(_plane_block(rho, inst))


def radial_fidelity(rho: np.ndarray, inst: SearchInstance) -> tuple:
    """(f_paper, p_success) overlaps with the target projector.

    f_paper = tr(rho |w><w|) / 2 is the half-normalized overlap (its
    ceiling is 1/2); p_success = tr(rho |w><w|)
    is the operational success probability.  Both are returned so the
    normalization ambiguity stays explicit.
    """
    rho = as_complex_matrix(rho)
    if rho.shape[0] != inst.n:
        raise DimensionMismatch(f"state dim {rho.shape[0]} != instance n {inst.n}")
    p = float(rho[inst.w, inst.w].real)
    return 0.5 * p, p


def angular_fidelity(rho: np.ndarray, inst: SearchInstance) -> float:
    """Cosine of the plane angle between rho and the target at (0, 1).

    Equals z/||(x, z)||.  Undefined at the Bloch center, where
    ZeroBlochVector is raised.
    """
    bloch = bloch_from_density(rho, inst)
    if bloch.norm <= BLOCH_ZERO_ATOL:
        raise ZeroBlochVector(f"Bloch norm {bloch.norm:.3e} has no direction")
    return bloch.z / bloch.norm


def phase_terms(chi: float, m: int, n: int, psi_sign: int = 1) -> Phi:
    """Assemble the closed-form phase phi_half = m*psi - m*theta + alpha.

    psi_sign flips the sign of psi; its defining relation only fixes
    cos^2(psi), so the branch is explorable.
    """
    prof = scalar_profile(chi)
    alpha = math.acos(1.0 / math.sqrt(n))
    theta = math.pi + chi + math.asin(2.0 * math.sqrt(n - 1.0) / n)
    phi_half = m * psi_sign * prof.psi - m * theta + alpha
    return Phi(chi=chi, m=m, n=n, phi_half=phi_half, theta=theta, alpha=alpha)


def closed_form_fidelities(
    chi: float, m: int, n: int, psi_sign: int = 1
) -> tuple:
    """The closed-form (f, cos_gamma) hypothesis:

    f = (1/4)[1 + cos^m(2 psi) cos(phi)], cos_gamma = cos^2(phi/2).

    Returned for side-by-side comparison with simulated values, never
    asserted against them; note f is bounded by 1/2 under this
    normalization.
    """
    if m < 0:
        raise ValueError(f"iteration count must be >= 0, got {m}")
    prof = scalar_profile(chi)
    ph = phase_terms(chi, m, n, psi_sign)
    damping = math.cos(2.0 * prof.psi) ** m
    f = 0.25 * (1.0 + damping * math.cos(2.0 * ph.phi_half))
    cos_gamma = math.cos(ph.phi_half) ** 2
    return f, cos_gamma


def bloch_contraction_factor(chi: float) -> float:
    """|cos(2 psi)|: predicted per-iteration shrink of the Bloch norm.

    A half-half mixture of two plane rotations whose Bloch angles differ
    by 4 psi contracts every Bloch vector by cos(2 psi) per step.  The
    trajectory ratio test is the authoritative check of this value.
    """
    return abs(math.cos(2.0 * scalar_profile(chi).psi))


def entropy_from_spectrum(values: np.ndarray) -> float:
    """-sum l ln(l) in nats, treating values below the floor as zero."""
    vals = np.asarray(values, dtype=float)
    vals = vals[vals > EIGENVALUE_FLOOR]
    return float(-np.sum(vals * np.log(vals)))


def entropy(rho: np.ndarray) -> float:
    """von Neumann entropy -tr(rho ln rho) in nats."""
    return entropy_from_spectrum(eigvals_hermitian(rho))


def majorization_check(after, before, atol: float = MAJORIZATION_ATOL) -> bool:
    """True iff `after` is majorized by `before` (more mixed than it).

    Both spectra are sorted descending; every partial sum of `after`
    must stay below the matching partial sum of `before` within atol,
    with equal totals.
    """
    a = np.sort(np.asarray(after, dtype=float))[::-1]
    b = np.sort(np.asarray(before, dtype=float))[::-1]
    if a.shape != b.shape:
        raise LengthMismatch(f"spectra lengths differ: {a.size} != {b.size}")
    if abs(a.sum() - 1.0) > 1e-8 or abs(b.sum() - 1.0) > 1e-8:
        raise ValueError("spectra must each sum to 1 within 1e-8")
    partial_gap = np.cumsum(a) - np.cumsum(b)
    return bool(np.all(partial_gap <= atol))


def _plane_trajectory(inst: SearchInstance, m_max: int) -> np.ndarray:
    """Evolve only the 2x2 plane block; valid because t preserves the plane."""
    channel = build_search_channel(inst)
    p = plane_basis(inst)
    ops2 = np.stack([p.conj().T @ k @ p for k in channel.kraus.operators])
    s2 = p.conj().T @ uniform_state(inst.n) @ p
    blocks = [s2]
    cur = s2
    for _ in range(m_max):
        cur = sum(
            w * (k @ cur @ k.conj().T) for w, k in zip(channel.kraus.weights, ops2)
        )
        blocks.append(cur)
    return np.stack(blocks)


def trajectory_report(
    inst: SearchInstance, m_max: int, psi_sign: int = 1
) -> TrajectoryReport:
    """Run m_max iterations from the uniform state and measure every step.

    Stores full density matrices only for n <= 256; above that the
    trajectory is evolved directly in the invariant plane and spectra are
    padded with the exact zeros of the complement.
    """
    if m_max < 1:
        raise ValueError(f"m_max must be >= 1, got {m_max}")
    report = TrajectoryReport(instance=inst)
    if inst.n <= FULL_STATE_LIMIT:
        states = iterate(build_search_channel(inst), uniform_state(inst.n), m_max)
        blocks = None
    else:
        states = None
        blocks = _plane_trajectory(inst, m_max)

    init_spectrum = None
    prev_spectrum = None
    for m in range(m_max + 1):
        if states is not None:
            rho = states[m]
            f_paper, p_success = radial_fidelity(rho, inst)
            block = _plane_block(rho, inst)
            spectrum = eigvals_hermitian(rho)
        else:
            block = blocks[m]
            p_success = float(block[0, 0].real)
            f_paper = 0.5 * p_success
            pad = np.zeros(inst.n - 2)
            spectrum = np.sort(np.concatenate(
                [np.linalg.eigvalsh(block).real, pad]
            ))[::-1]
        bloch = _bloch_of_block(block)
        cos_gamma = bloch.z / bloch.norm if bloch.norm > BLOCH_ZERO_ATOL else math.nan
        report.points.append(
            FidelityPoint(
                m=m,
                f_paper=f_paper,
                p_success=p_success,
                cos_gamma=cos_gamma,
                bloch_norm=bloch.norm,
            )
        )
        fc, cgc = closed_form_fidelities(inst.chi, m, inst.n, psi_sign)
        report.f_closed.append(fc)
        report.cos_gamma_closed.append(cgc)
        report.entropies.append(entropy_from_spectrum(spectrum))
        report.spectra.append(spectrum)
        if init_spectrum is None:
            init_spectrum = spectrum
            report.majorized_by_prev.append(True)
            report.majorized_by_init.append(True)
        else:
            report.majorized_by_prev.append(majorization_check(spectrum, prev_spectrum))
            report.majorized_by_init.append(majorization_check(spectrum, init_spectrum))
        prev_spectrum = spectrum
    return report


def high_precision_bloch_norms(
    inst: SearchInstance, m_max: int, dps: int = 40
) -> np.ndarray:
    """Bloch norms along the trajectory, built and run in mpmath.

    float64 operator construction leaves ~1e-16 defects that pin the
    Bloch vector to a plateau near 1e-15, masking the true geometric
    decay once norms fall below roughly 1e-7.  Rebuilding the channel and
    iterating at dps digits resolves the decay to machine-irrelevant
    depth.  Returns float64 norms (their relative accuracy survives the
    conversion).  Intended for modest n; cost grows as n^3 per step.
    """
    import mpmath as mp

    with mp.workdps(dps):
        chi = mp.mpf(repr(float(inst.chi)))
        n, w = inst.n, inst.w
        mu = mp.sqrt(chi**2 / 4 + mp.pi**2 / 16)
        delta = mp.sin(mu) / mu
        psi = mp.atan2(abs(chi / 2 * delta), abs(mp.cos(mu)))

        def rot(a):
            return mp.matrix([[mp.cos(a), mp.sin(a)], [-mp.sin(a), mp.cos(a)]])

        basis = mp.matrix(n, 2)
        basis[w, 0] = mp.mpf(1)
        for i in range(n):
            if i != w:
                basis[i, 1] = 1 / mp.sqrt(n - 1)
        s = mp.matrix([[1 / mp.sqrt(n)] for _ in range(n)])
        refl_s = mp.eye(n) - 2 * (s * s.T)
        refl_w = mp.eye(n)
        refl_w[w, w] = mp.mpf(-1)
        ops = []
        for v in (rot(psi - chi / 2), rot(-chi / 2)):
            lifted = mp.eye(n) + basis * (v - mp.eye(2)) * basis.T
            ops.append(lifted * refl_s * lifted.T * refl_w)
        ops_t = [k.T for k in ops]
        rho = mp.matrix([[mp.mpf(1) / n] * n for _ in range(n)])
        half = mp.mpf(1) / 2
        norms = []
        for step in range(m_max + 1):
            col_w, col_r = basis[:, 0], basis[:, 1]
            x = 2 * (col_w.T * rho * col_r)[0]
            z = (col_w.T * rho * col_w)[0] - (col_r.T * rho * col_r)[0]
            norms.append(float(mp.sqrt(x * x + z * z)))
            if step < m_max:
                rho = half * (ops[0] * rho * ops_t[0]) + half * (ops[1] * rho * ops_t[1])
    return np.array(norms)
