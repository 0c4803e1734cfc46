"""Collective spin operators, coherent and twisted states, rotations.

Everything lives in the (2j+1)-dimensional symmetric subspace; tensor
products over individual particles are never formed. The J_z eigenbasis
is ordered m = j, j-1, ..., -j throughout. Unitaries are always built by
spectral decomposition of their Hermitian generator, which keeps them
unitary to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .operators import HermitianOperator, ProjectiveBasis, QuantumState, _as_matrix


def _check_spin_length(j) -> float:
    j = float(j)
    two_j = 2.0 * j
    if not np.isfinite(j) or j <= 0 or abs(two_j - round(two_j)) > 1e-9:
        raise ValueError(f"spin length must be a positive half-integer, got {j}")
    return j


def _dim(j: float) -> int:
    return int(round(2 * j)) + 1


@dataclass(eq=False)
class SpinSystem:
    """Collective spin-j operators for N = 2j spin-1/2 particles."""

    j: float
    N: int
    Jx: HermitianOperator
    Jy: HermitianOperator
    Jz: HermitianOperator


@lru_cache(maxsize=32)
def make_spin_operators(j) -> SpinSystem:
    """Matrix representations of Jx, Jy, Jz in the J_z eigenbasis (m = j..-j)."""
    j = _check_spin_length(j)
    d = _dim(j)
    m = j - np.arange(d)
    jz = np.diag(m).astype(complex)
    # J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>; raising moves one row up.
    k = np.arange(1, d)
    amp = np.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    jplus = np.zeros((d, d), dtype=complex)
    jplus[k - 1, k] = amp
    jx = (jplus + jplus.conj().T) / 2
    jy = (jplus - jplus.conj().T) / 2j
    return SpinSystem(
        j=j,
        N=int(round(2 * j)),
        Jx=HermitianOperator(jx),
        Jy=HermitianOperator(jy),
        Jz=HermitianOperator(jz),
    )


def coherent_state_z(j) -> QuantumState:
    """The highest-weight J_z eigenstate |j, j>_z (all spins polarized along z)."""
    j = _check_spin_length(j)
    v = np.zeros(_dim(j), dtype=complex)
    v[0] = 1.0
    return QuantumState.pure(v)


@lru_cache(maxsize=16)
def _jy_eigensystem(j):
    """Eigenvalues (rounded to exact half-integers, ascending) and
    phase-fixed eigenvectors of Jy.

    The phase of each eigenvector is fixed by making its largest-magnitude
    component real and positive, so downstream coefficient signs are
    deterministic.
    """
    spin = make_spin_operators(j)
    w, v = np.linalg.eigh(spin.Jy.matrix)
    idx = np.argmax(np.abs(v), axis=0)
    lead = v[idx, np.arange(v.shape[1])]
    v = v * (np.abs(lead) / lead)
    m = np.round(2 * w) / 2
    return m, v


def oat_state(j, tau: float) -> QuantumState:
    """One-axis-twisted state exp(-i Jy^2 tau) |j, j>_z.

    Computed exactly by expanding the coherent state in the Jy eigenbasis
    and applying the diagonal phases exp(-i m^2 tau).
    """
    j = _check_spin_length(j)
    tau = float(tau)
    if not np.isfinite(tau):
        raise ValueError("twisting time must be finite")
    m, v = _jy_eigensystem(j)
    amps = v.conj().T @ coherent_state_z(j).data
    twisted = v @ (np.exp(-1j * m**2 * tau) * amps)
    return QuantumState.pure(twisted)


def phase_evolve(state: QuantumState, hamiltonian, theta: float) -> QuantumState:
    """Apply exp(-i H theta) via spectral decomposition of H."""
    h = _as_matrix(hamiltonian)
    if h.shape[0] != state.dim:
        raise ValueError(
            f"dimension mismatch: state dim {state.dim}, operator dim {h.shape[0]}"
        )
    w, v = np.linalg.eigh(h)
    phases = np.exp(-1j * w * float(theta))
    if state.is_pure:
        evolved = v @ (phases * (v.conj().T @ state.data))
        return QuantumState.pure(evolved / np.linalg.norm(evolved))
    u = v * phases
    rho = u @ (v.conj().T @ state.data @ v) @ u.conj().T
    rho = (rho + rho.conj().T) / 2
    return QuantumState.mixed(rho / np.trace(rho).real)


def rotate(state: QuantumState, axis: str, angle: float) -> QuantumState:
    """Apply exp(-i J_axis angle) for the spin system matching the state's dimension."""
    if axis not in ("x", "y", "z"):
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    j = (state.dim - 1) / 2
    spin = make_spin_operators(j)
    generator = {"x": spin.Jx, "y": spin.Jy, "z": spin.Jz}[axis]
    return phase_evolve(state, generator, angle)


@lru_cache(maxsize=2)
def jy_basis(j) -> ProjectiveBasis:
    """Rank-1 projectors onto Jy eigenstates, labeled m_y = -j .. j (ascending)."""
    j = _check_spin_length(j)
    m, v = _jy_eigensystem(j)
    return ProjectiveBasis.from_vectors(v, tuple(m.tolist()))
