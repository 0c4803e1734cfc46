"""Random instances for property verification.

Everything is driven by a numpy Generator so a single seed reproduces
the full instance stream byte for byte.
"""

from __future__ import annotations

import numpy as np

from .operators import HermitianOperator, ProjectiveBasis, QuantumState

THETA_RANGE = (0.2, 2.9)


def haar_state(rng: np.random.Generator, dim: int) -> QuantumState:
    """Haar-random pure state: normalized complex Gaussian vector."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return QuantumState.pure(v / np.linalg.norm(v))


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> QuantumState:
    """Random full- or low-rank density matrix G G^dagger / Tr."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return QuantumState.mixed(rho / np.trace(rho).real)


def gue_hermitian(rng: np.random.Generator, dim: int) -> HermitianOperator:
    """Gaussian-unitary-ensemble Hermitian matrix, (A + A^dagger)/2."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator((a + a.conj().T) / 2)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_basis(rng: np.random.Generator, dim: int) -> ProjectiveBasis:
    """Computational basis conjugated by a Haar-random unitary."""
    u = random_unitary(rng, dim)
    return ProjectiveBasis.from_vectors(u, tuple(range(dim)))


def random_instance(
    rng: np.random.Generator,
    dims=(2, 3, 4, 5, 6, 7, 8),
    mixed_fraction: float = 0.25,
):
    """One (state, hamiltonian, basis, theta) draw.

    The state is pure with probability 1 - mixed_fraction and a random
    full-rank density matrix otherwise; theta ~ uniform(0.2, 2.9).
    """
    dim = int(rng.choice(np.asarray(dims)))
    if rng.random() < mixed_fraction:
        state = random_density(rng, dim)
    else:
        state = haar_state(rng, dim)
    h = gue_hermitian(rng, dim)
    basis = random_basis(rng, dim)
    theta = float(rng.uniform(*THETA_RANGE))
    return state, h, basis, theta


def random_probabilities(rng: np.random.Generator, r: int) -> np.ndarray:
    """Dirichlet(1,...,1) probability vector of length r (all entries > 0)."""
    p = rng.dirichlet(np.ones(r))
    # Dirichlet can return exact zeros at float precision; nudge and renormalize.
    p = np.clip(p, 1e-12, None)
    return p / p.sum()
