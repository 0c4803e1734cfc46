"""Covariance/commutator matrices, the moment matrix, and reduced
projector statistics.

Two independent computation routes live here. The generic route builds
the full covariance matrix Gamma and commutator matrix C of an operator
family and forms the moment matrix M = C^T Gamma^+ C. The closed-form
route reduces a (Hamiltonian, projective basis) family to per-outcome
probabilities, derivatives and covariances plus the scalars a and b.
The two must agree and are cross-checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DivergenceDiagnostic, NumericalConsistencyError
from .operators import (
    HermitianOperator,
    ProjectiveBasis,
    QuantumState,
    _as_matrix,
)

PROB_FLOOR = 1e-12
RANK_CUTOFF = 1e-10
IMAG_RESIDUE_ATOL = 1e-10
DERIVATIVE_DIVERGENCE_ATOL = 1e-8


@dataclass(eq=False)
class OperatorFamily:
    """An ordered family of Hermitian operators sharing one dimension."""

    members: tuple

    def __post_init__(self):
        self.members = tuple(
            m if isinstance(m, HermitianOperator) else HermitianOperator(m)
            for m in self.members
        )
        if not self.members:
            raise ValueError("operator family must not be empty")
        d = self.members[0].dim
        for m in self.members:
            if m.dim != d:
                raise ValueError("family members must share one dimension")

    @property
    def dim(self) -> int:
        return self.members[0].dim

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(eq=False)
class MomentData:
    """Covariance matrix, commutator matrix and the derived moment matrix."""

    gamma: np.ndarray
    commutator: np.ndarray
    moment: np.ndarray
    rank_deficient: bool


def _second_moments(state: QuantumState, mats: np.ndarray):
    """Pairwise moments G_kl = <H_k H_l> and means mu_k for stacked operators."""
    if state.is_pure:
        v = state.data
        applied = mats @ v  # (L, d)
        gram = applied.conj() @ applied.T
        means = np.einsum("i,ki->k", v.conj(), applied).real
    else:
        rho = state.data
        applied = mats @ rho  # (L, d, d): H_l rho
        gram = np.einsum("kij,lji->kl", mats, applied)
        means = np.einsum("kii->k", applied).real
    return gram, means


def _gamma_commutator(state: QuantumState, mats: np.ndarray):
    gram, means = _second_moments(state, mats)
    # G_kl = <H_k H_l> is Hermitian: Re G is the symmetrized second moment
    # and 2 Im G is the commutator matrix -i<[H_k, H_l]>. Any Hermiticity
    # defect means one of the two carries spurious residue.
    if np.max(np.abs(gram - gram.conj().T)) > 2 * IMAG_RESIDUE_ATOL:
        raise NumericalConsistencyError(
            "covariance/commutator matrices carry imaginary residue above 1e-10"
        )
    gram = (gram + gram.conj().T) / 2
    gamma = gram.real - np.outer(means, means)
    return gamma, 2.0 * gram.imag, means


def _pseudo_inverse_moment(gamma: np.ndarray, comm: np.ndarray, rank_cutoff: float):
    """M = C^T Gamma^+ C with Jacobi equilibration for scale robustness.

    Gamma = D Gt D with D = diag(sqrt(diag Gamma)); the moment matrix is
    invariant under this rescaling, but the pseudo-inverse cutoff then
    acts on a unit-diagonal matrix instead of one whose diagonal spans
    many orders of magnitude (tiny-probability projectors).
    """
    scale = np.sqrt(np.clip(np.diag(gamma), 0.0, None))
    scale = np.where(scale > 0, scale, 1.0)
    gt = gamma / np.outer(scale, scale)
    ct = comm / np.outer(scale, scale)
    w, u = np.linalg.eigh((gt + gt.T) / 2)
    top = max(w.max(initial=0.0), 0.0)
    cutoff = rank_cutoff * top
    keep = w > cutoff
    inv_w = np.where(keep, 1.0 / np.where(keep, w, 1.0), 0.0)
    gamma_pinv = (u * inv_w) @ u.T
    moment = ct.T @ gamma_pinv @ ct
    moment = (moment + moment.T) / 2 * np.outer(scale, scale)
    return moment, bool((~keep).any())


def moment_data(
    state: QuantumState, family: OperatorFamily, rank_cutoff: float = RANK_CUTOFF
) -> MomentData:
    """Covariance, commutator and moment matrices of a family under a state."""
    if family.dim != state.dim:
        raise ValueError(
            f"dimension mismatch: state dim {state.dim}, family dim {family.dim}"
        )
    mats = np.stack([m.matrix for m in family.members])
    gamma, comm, _ = _gamma_commutator(state, mats)
    moment, deficient = _pseudo_inverse_moment(gamma, comm, rank_cutoff)
    return MomentData(
        gamma=gamma, commutator=comm, moment=moment, rank_deficient=deficient
    )


def moment_matrix(md: MomentData, rank_cutoff: float = RANK_CUTOFF) -> np.ndarray:
    """Recompute M = C^T Gamma^+ C from stored covariance/commutator matrices."""
    moment, _ = _pseudo_inverse_moment(md.gamma, md.commutator, rank_cutoff)
    return moment


def max_moment_sensitivity(md: MomentData, n) -> float:
    """n^T M n: the maximal inverse estimator variance over the family's span,
    for a generator expressed as H = n^T (H_1, ..., H_L)."""
    n = np.asarray(n, dtype=float)
    if n.shape != (md.moment.shape[0],):
        raise ValueError(
            f"coefficient vector length {n.shape} does not match family size "
            f"{md.moment.shape[0]}"
        )
    return float(n @ md.moment @ n)


@dataclass(eq=False)
class ReducedStats:
    """Per-outcome statistics of a (Hamiltonian, projective basis) pair.

    Arrays cover all r outcomes; entries for masked outcomes (probability
    below the floor) are kept in place but excluded from every reduction.
    ``a_inv`` is kept alongside ``a`` so that the degenerate case
    a_inv -> 0 can be handled without forming an infinity early.
    """

    p: np.ndarray
    d: np.ndarray
    gamma: np.ndarray
    a: float
    a_inv: float
    b: float
    w: np.ndarray
    removed_index: int
    kept: np.ndarray
    mean_h: float
    var_h: float
    diagnostics: tuple = field(default_factory=tuple)


def _projector_cross_terms(state: QuantumState, basis: ProjectiveBasis, h: np.ndarray):
    """p_x, <Pi_x H> (complex) and <H>, Var(H) in one pass."""
    stack = basis.stack
    if state.is_pure:
        v = state.data
        hv = h @ v
        applied = stack @ v  # (r, d): Pi_x |psi>
        p = np.einsum("xi,i->x", applied.conj(), v).real
        cross = np.einsum("xi,i->x", applied.conj(), hv)
        mean_h = float((v.conj() @ hv).real)
        var_h = float((hv.conj() @ hv).real - mean_h**2)
    else:
        rho = state.data
        hrho = h @ rho
        p = np.einsum("xij,ji->x", stack, rho).real
        cross = np.einsum("xij,ji->x", stack, hrho)
        mean_h = float(np.trace(hrho).real)
        var_h = float(np.trace(h @ hrho).real - mean_h**2)
    return p, cross, mean_h, var_h


def reduced_projector_stats(
    state_theta: QuantumState,
    hamiltonian,
    basis: ProjectiveBasis,
    prob_floor: float = PROB_FLOOR,
) -> ReducedStats:
    """Closed-form reduced statistics of the evolved state.

    p_x = Tr(rho Pi_x), d_x = -i<[Pi_x, H]> (the analytic probability
    derivative), gamma_x = Cov(H, Pi_x); a, b and w are the scalars of
    the block-inverse reduction. Outcomes with p_x < prob_floor are
    masked; the removed outcome is the most probable one, which divides
    by the largest probability and conditions the reduction best.
    """
    h = _as_matrix(hamiltonian)
    if basis.dim != state_theta.dim or h.shape[0] != state_theta.dim:
        raise ValueError("state, Hamiltonian and basis dimensions do not match")
    p, cross, mean_h, var_h = _projector_cross_terms(state_theta, basis, h)
    d = 2.0 * cross.imag
    gamma = cross.real - mean_h * p
    kept = p >= prob_floor
    if not kept.any():
        raise RuntimeError("all outcome probabilities fell below the mask floor")
    diagnostics = tuple(
        DivergenceDiagnostic(int(x), float(p[x]), float(d[x]))
        for x in np.nonzero(~kept)[0]
        if abs(d[x]) > DERIVATIVE_DIVERGENCE_ATOL
    )
    removed = int(np.argmax(p))
    pk = p[kept]
    a_inv = float(var_h - np.sum(gamma[kept] ** 2 / pk))
    scale = max(abs(var_h), 1.0)
    if a_inv < -1e-9 * scale:
        raise NumericalConsistencyError(
            f"covariance reduction produced a negative a^-1 = {a_inv:.3e}"
        )
    a = 1.0 / a_inv if a_inv > 0 else np.inf
    b = float(np.sum(gamma[kept] * d[kept] / pk))
    others = [x for x in np.nonzero(kept)[0] if x != removed]
    w = gamma[others] / p[others] - gamma[removed] / p[removed]
    return ReducedStats(
        p=p,
        d=d,
        gamma=gamma,
        a=a,
        a_inv=a_inv,
        b=b,
        w=w,
        removed_index=removed,
        kept=kept,
        mean_h=mean_h,
        var_h=var_h,
        diagnostics=diagnostics,
    )


def structured_inverse(p, removed_index: int) -> np.ndarray:
    """Closed-form inverse of the reduced projector covariance matrix.

    For probabilities p over r outcomes with outcome ``removed_index``
    dropped, the covariance of the remaining projectors is
    diag(p) - p p^T, whose inverse is diag(1/p) + (1/p_r) * ones.
    """
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size < 2:
        raise ValueError("need at least two outcome probabilities")
    if not 0 <= removed_index < p.size:
        raise ValueError(f"removed index {removed_index} out of range")
    if np.any(p <= 0):
        raise ValueError("all probabilities must be strictly positive")
    others = np.concatenate([p[:removed_index], p[removed_index + 1 :]])
    return np.diag(1.0 / others) + 1.0 / p[removed_index]


def block_inverse(stats: ReducedStats) -> np.ndarray:
    """Closed-form inverse of the full covariance matrix over the family
    (H, Pi_1, ..., Pi_{r-1}) assembled from a, w and the structured
    projector inverse:

        Gamma^-1 = [[ a,      -a w^T          ],
                    [-a w,  Gamma_Pi^-1 + a w w^T]]

    Only valid when a^-1 > 0 (H not in the projector span).
    """
    if stats.a_inv <= 0:
        raise ValueError("block inverse undefined for a degenerate reduction")
    kept_idx = np.nonzero(stats.kept)[0]
    others = kept_idx[kept_idx != stats.removed_index]
    gp_inv = structured_inverse(
        stats.p[stats.kept], int(np.searchsorted(kept_idx, stats.removed_index))
    )
    a = stats.a
    w = stats.w
    out = np.empty((others.size + 1, others.size + 1))
    out[0, 0] = a
    out[0, 1:] = -a * w
    out[1:, 0] = -a * w
    out[1:, 1:] = gp_inv + a * np.outer(w, w)
    return out


def reduced_family(hamiltonian, basis: ProjectiveBasis, stats: ReducedStats) -> OperatorFamily:
    """The family (H, Pi_1, ..., Pi_{r-1}) with the removed and masked
    outcomes dropped, matching the reduction behind ``stats``."""
    h = hamiltonian if isinstance(hamiltonian, HermitianOperator) else HermitianOperator(hamiltonian)
    members = [h]
    for x in np.nonzero(stats.kept)[0]:
        if x != stats.removed_index:
            members.append(basis.projectors[x])
    return OperatorFamily(members=tuple(members))
