"""Optimal measurement observables and their coefficient representations.

X_opt0 = sum_x (d_x / p_x) Pi_x saturates the classical Fisher
information of the basis; X_opt adds the generator contribution
a b (sum_x gamma_x / p_x Pi_x - H) and saturates F + E. Both satisfy
Var(X) = -i<[X, H]> = chi^-2_max, so the additive identity offset is
irrelevant to the sensitivity and fixed to zero here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import chi_squared_inverse
from .moments import ReducedStats, reduced_projector_stats
from .operators import HermitianOperator, ProjectiveBasis, QuantumState, _as_matrix
from .spin import phase_evolve


@dataclass(frozen=True)
class ObservableCoefficients:
    """Real expansion coefficients of X = c_h H + sum_x c_proj[x] Pi_x."""

    c_h: float
    c_proj: np.ndarray
    normalized: bool = False
    offset: float = 0.0

    def __post_init__(self):
        object.__setattr__(
            self, "c_proj", np.asarray(self.c_proj, dtype=float).copy()
        )
        if self.normalized:
            total = self.c_h**2 + float(np.sum(self.c_proj**2))
            if abs(total - 1.0) > 1e-10:
                raise ValueError("coefficients flagged normalized but norm != 1")


def assemble_observable(
    coeffs: ObservableCoefficients, hamiltonian, basis: ProjectiveBasis
) -> HermitianOperator:
    """Build the operator c_h H + sum_x c_proj[x] Pi_x + offset * I."""
    h = _as_matrix(hamiltonian)
    if coeffs.c_proj.shape[0] != basis.size:
        raise ValueError("coefficient count does not match the basis size")
    x = np.tensordot(coeffs.c_proj, basis.stack, axes=1) + coeffs.c_h * h
    if coeffs.offset != 0.0:
        x = x + coeffs.offset * np.eye(basis.dim)
    return HermitianOperator((x + x.conj().T) / 2)


def normalize_coefficients(raw: ObservableCoefficients) -> ObservableCoefficients:
    """Scale so c_h^2 + sum c_x^2 = 1; sign fixed by making the
    largest-magnitude coefficient positive. The offset is scaled along."""
    stacked = np.concatenate([[raw.c_h], raw.c_proj])
    norm = float(np.linalg.norm(stacked))
    if norm == 0.0:
        raise ValueError("cannot normalize an all-zero coefficient vector")
    stacked = stacked / norm
    lead = stacked[np.argmax(np.abs(stacked))]
    sign = -1.0 if lead < 0 else 1.0
    stacked *= sign
    return ObservableCoefficients(
        c_h=float(stacked[0]),
        c_proj=stacked[1:],
        normalized=True,
        offset=raw.offset * sign / norm,
    )


def _hamiltonian_weight(stats: ReducedStats) -> float:
    """The product a*b, with the degenerate a^-1 -> 0 limit mapped to 0."""
    if stats.a_inv <= 0:
        return 0.0
    return stats.b / stats.a_inv


def _stats_at(state, hamiltonian, basis, theta):
    state_theta = phase_evolve(state, hamiltonian, theta)
    return state_theta, reduced_projector_stats(state_theta, hamiltonian, basis)


def x_opt0(
    state: QuantumState, hamiltonian, basis: ProjectiveBasis, theta: float
):
    """Optimal observable when only the basis projectors are measurable:
    X_opt0 = sum_x (d_x / p_x) Pi_x over kept outcomes."""
    _, stats = _stats_at(state, hamiltonian, basis, theta)
    safe_p = np.where(stats.kept, stats.p, 1.0)
    c_proj = np.where(stats.kept, stats.d / safe_p, 0.0)
    coeffs = ObservableCoefficients(c_h=0.0, c_proj=c_proj)
    return assemble_observable(coeffs, hamiltonian, basis), coeffs


def x_opt(
    state: QuantumState, hamiltonian, basis: ProjectiveBasis, theta: float
):
    """Optimal observable with access to the generator:
    X_opt = X_opt0 + a b (sum_x gamma_x / p_x Pi_x - H)."""
    _, stats = _stats_at(state, hamiltonian, basis, theta)
    ab = _hamiltonian_weight(stats)
    safe_p = np.where(stats.kept, stats.p, 1.0)
    c_proj = np.where(stats.kept, (stats.d + ab * stats.gamma) / safe_p, 0.0)
    coeffs = ObservableCoefficients(c_h=-ab, c_proj=c_proj)
    return assemble_observable(coeffs, hamiltonian, basis), coeffs


def ablated_observable(
    state: QuantumState, hamiltonian, basis: ProjectiveBasis, theta: float
):
    """X_opt with its generator part removed (X_opt + a b H).

    Implementable without access to H; keeps the gradient of X_opt but
    not its variance, so its sensitivity collapses below F when E > 0.
    Returns the operator and its chi^-2 on the evolved state.
    """
    state_theta, stats = _stats_at(state, hamiltonian, basis, theta)
    ab = _hamiltonian_weight(stats)
    safe_p = np.where(stats.kept, stats.p, 1.0)
    c_proj = np.where(stats.kept, (stats.d + ab * stats.gamma) / safe_p, 0.0)
    coeffs = ObservableCoefficients(c_h=0.0, c_proj=c_proj)
    op = assemble_observable(coeffs, hamiltonian, basis)
    return op, chi_squared_inverse(state_theta, hamiltonian, op)
