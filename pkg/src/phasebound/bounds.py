"""Scalar sensitivity quantities and their hierarchy.

chi^2 is the method-of-moments estimator variance (per repetition) of a
single observable; F is the classical Fisher information of a projective
basis; E = a b^2 is the additive gain available when the generator's
expectation value is known; F_Q is the quantum Fisher information. The
chain F <= F + E <= F_Q holds for every instance and is enforced.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import NumericalConsistencyError
from .moments import (
    ReducedStats,
    max_moment_sensitivity,
    moment_data,
    reduced_family,
    reduced_projector_stats,
)
from .operators import ProjectiveBasis, QuantumState, _as_matrix, variance
from .spin import SpinSystem, phase_evolve

COMMUTATOR_FLOOR = 1e-14
TWO_PATH_RTOL = 1e-8
HIERARCHY_RTOL = 1e-8
NEGATIVE_E_WINDOW = 1e-9


@dataclass(frozen=True)
class SensitivityBreakdown:
    """All scalar sensitivities of one (state, generator, basis, theta) instance."""

    f: float
    e: float
    f_plus_e: float
    f_q: float
    a: float
    b: float
    chi_sqz: float | None = None
    repetitions: int | None = None
    estimator_variance: float | None = None

    def with_repetitions(self, mu: int) -> "SensitivityBreakdown":
        """Attach the estimator variance chi^2 / mu for mu repetitions."""
        if mu < 1:
            raise ValueError("repetition count must be a positive integer")
        var = 1.0 / (mu * self.f_plus_e) if self.f_plus_e > 0 else np.inf
        return replace(self, repetitions=int(mu), estimator_variance=var)


def chi_squared(state_theta: QuantumState, hamiltonian, observable) -> float:
    """Estimator variance (Delta X)^2 / |<[X, H]>|^2 of the method of moments.

    Returns +inf when the commutator expectation vanishes (parameter-
    insensitive observable); sweeps must not abort on such points.
    """
    h = _as_matrix(hamiltonian)
    x = _as_matrix(observable)
    if h.shape != x.shape or h.shape[0] != state_theta.dim:
        raise ValueError("state, Hamiltonian and observable dimensions do not match")
    if state_theta.is_pure:
        v = state_theta.data
        comm = 2.0 * float((v.conj() @ x @ (h @ v)).imag)
    else:
        comm = 2.0 * float(np.trace(state_theta.data @ x @ h).imag)
    if abs(comm) <= COMMUTATOR_FLOOR:
        return np.inf
    return variance(state_theta, x) / comm**2


def chi_squared_inverse(state_theta: QuantumState, hamiltonian, observable) -> float:
    """Inverse of :func:`chi_squared`; 0 for parameter-insensitive observables."""
    value = chi_squared(state_theta, hamiltonian, observable)
    return 0.0 if np.isinf(value) else 1.0 / value


def fisher_from_stats(stats: ReducedStats) -> float:
    """F = sum_x d_x^2 / p_x over kept outcomes."""
    kept = stats.kept
    return float(np.sum(stats.d[kept] ** 2 / stats.p[kept]))


def classical_fisher(
    state_theta: QuantumState, hamiltonian, basis: ProjectiveBasis
) -> float:
    """Classical Fisher information of the basis, from analytic derivatives."""
    return fisher_from_stats(reduced_projector_stats(state_theta, hamiltonian, basis))


def enhancement(stats: ReducedStats) -> float:
    """E = a b^2, the sensitivity gained from knowing <H>.

    Nonnegative by construction; tiny negative values of a^-1 inside the
    clamp window map to E = 0, anything beyond it is a consistency error
    (raised when the stats were built).
    """
    if stats.a_inv <= 0:
        # Degenerate reduction (H in the projector span); b vanishes there.
        if abs(stats.b) > 1e-8 * max(1.0, abs(stats.var_h)):
            raise NumericalConsistencyError(
                "vanishing a^-1 with a non-vanishing b coefficient"
            )
        return 0.0
    e = stats.b**2 / stats.a_inv
    if e < 0:
        if e < -NEGATIVE_E_WINDOW:
            raise NumericalConsistencyError(f"negative enhancement E = {e:.3e}")
        return 0.0
    return e


def quantum_fisher(state: QuantumState, hamiltonian) -> float:
    """Quantum Fisher information: 4 Var(H) for pure states, the spectral
    sum 2 sum_kl (l_k - l_l)^2 / (l_k + l_l) |<k|H|l>|^2 for mixed ones."""
    h = _as_matrix(hamiltonian)
    if h.shape[0] != state.dim:
        raise ValueError("state and Hamiltonian dimensions do not match")
    if state.is_pure:
        return 4.0 * variance(state, h)
    evals, evecs = np.linalg.eigh(state.data)
    h_eig = evecs.conj().T @ h @ evecs
    lk = evals[:, None]
    ll = evals[None, :]
    denom = lk + ll
    mask = denom > 1e-12
    terms = np.where(mask, (lk - ll) ** 2 / np.where(mask, denom, 1.0), 0.0)
    return float(2.0 * np.sum(terms * np.abs(h_eig) ** 2))


def enhanced_sensitivity(
    state: QuantumState,
    hamiltonian,
    basis: ProjectiveBasis,
    theta: float,
    cross_check: bool = True,
) -> SensitivityBreakdown:
    """Evolve by theta and compute F, E, F+E and F_Q.

    F + E from the closed-form reduction is cross-checked against the
    independent moment-matrix route e_1^T M e_1 over the family
    (H, Pi_1, ..., Pi_{r-1}); disagreement beyond 1e-8 relative raises.
    The hierarchy F <= F+E <= F_Q is enforced likewise.
    """
    state_theta = phase_evolve(state, hamiltonian, theta)
    stats = reduced_projector_stats(state_theta, hamiltonian, basis)
    f = fisher_from_stats(stats)
    e = enhancement(stats)
    f_plus_e = f + e
    if cross_check:
        family = reduced_family(hamiltonian, basis, stats)
        md = moment_data(state_theta, family)
        unit = np.zeros(family.size)
        unit[0] = 1.0
        matrix_route = max_moment_sensitivity(md, unit)
        tol = TWO_PATH_RTOL * max(abs(f_plus_e), abs(matrix_route)) + 1e-9 * max(
            1.0, abs(stats.var_h)
        )
        if abs(f_plus_e - matrix_route) > tol:
            raise NumericalConsistencyError(
                f"closed-form F+E = {f_plus_e:.12e} disagrees with the "
                f"moment-matrix route {matrix_route:.12e}"
            )
    f_q = quantum_fisher(state, hamiltonian)
    slack = HIERARCHY_RTOL * max(abs(f_q), 1.0)
    if not (f <= f_plus_e + slack and f_plus_e <= f_q + slack):
        raise NumericalConsistencyError(
            f"sensitivity hierarchy violated: F={f:.6e}, F+E={f_plus_e:.6e}, "
            f"F_Q={f_q:.6e}"
        )
    return SensitivityBreakdown(
        f=f, e=e, f_plus_e=f_plus_e, f_q=f_q, a=stats.a, b=stats.b
    )


def spin_squeezing_sensitivity(state: QuantumState, spin: SpinSystem):
    """Best method-of-moments sensitivity over collective-spin generators
    and observables: the largest eigenvalue of the 3x3 moment matrix over
    (Jx, Jy, Jz), maximized over unit generator directions n.

    Returns ``(value, n)`` with the optimal direction sign-fixed.
    """
    from .moments import OperatorFamily  # local import avoids cycle at module load

    if spin.Jx.dim != state.dim:
        raise ValueError("state dimension does not match the spin system")
    md = moment_data(state, OperatorFamily(members=(spin.Jx, spin.Jy, spin.Jz)))
    evals, evecs = np.linalg.eigh(md.moment)
    n = evecs[:, -1]
    lead = n[np.argmax(np.abs(n))]
    if lead < 0:
        n = -n
    return float(evals[-1]), n


def entanglement_witness(chi_inv2: float, n_particles: int) -> int:
    """Largest integer k with chi^-2 / N > k; at least k particles are entangled."""
    if chi_inv2 < 0:
        raise ValueError("inverse sensitivity must be nonnegative")
    if n_particles < 1:
        raise ValueError("particle number must be positive")
    ratio = chi_inv2 / n_particles
    k = int(np.floor(ratio))
    if k >= ratio:  # ratio is an exact integer; strict inequality fails there
        k -= 1
    return max(k, 0)
