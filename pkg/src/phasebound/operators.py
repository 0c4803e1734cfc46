"""Dense Hermitian operators, quantum states, and projective measurement bases.

All matrices are dense complex numpy arrays in units with hbar = 1.
Instances are treated as immutable after construction; the constructors
validate the defining invariants once and everything downstream relies
on them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

HERMITICITY_ATOL = 1e-12
STATE_ATOL = 1e-12
PROJECTOR_ATOL = 1e-10

# Pairwise orthogonality of r projectors costs O(r^2 d^3); beyond this
# dimension it is implied by completeness + idempotence and skipped.
_PAIRWISE_ORTHO_MAX_DIM = 40


def _as_matrix(op) -> np.ndarray:
    """Accept a HermitianOperator or a raw ndarray."""
    if isinstance(op, HermitianOperator):
        return op.matrix
    return np.asarray(op, dtype=complex)


@dataclass(eq=False)
class HermitianOperator:
    """A dense complex square matrix asserted Hermitian at construction."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] < 1:
            raise ValueError("operator dimension must be positive")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_ATOL:
            raise ValueError("matrix is not Hermitian within 1e-12 per element")
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(eq=False)
class QuantumState:
    """A pure state vector or a density matrix.

    Use the :meth:`pure` / :meth:`mixed` constructors; they validate
    normalization, Hermiticity, unit trace and positivity.
    """

    kind: str
    data: np.ndarray

    @classmethod
    def pure(cls, vector) -> "QuantumState":
        v = np.asarray(vector, dtype=complex).ravel()
        if v.size < 1:
            raise ValueError("state dimension must be positive")
        if abs(np.linalg.norm(v) - 1.0) > STATE_ATOL:
            raise ValueError("pure state vector is not normalized within 1e-12")
        return cls(kind="pure", data=v)

    @classmethod
    def mixed(cls, matrix) -> "QuantumState":
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > STATE_ATOL:
            raise ValueError("density matrix is not Hermitian within 1e-12")
        if abs(np.trace(m).real - 1.0) > STATE_ATOL:
            raise ValueError("density matrix trace differs from 1 beyond 1e-12")
        evals = np.linalg.eigvalsh(m)
        if evals.min() < -1e-10:
            raise ValueError("density matrix has an eigenvalue below -1e-10")
        return cls(kind="mixed", data=m)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def is_pure(self) -> bool:
        return self.kind == "pure"

    def density(self) -> np.ndarray:
        """Density-matrix representation (outer product for pure states)."""
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data


@dataclass(eq=False)
class ProjectiveBasis:
    """A complete set of mutually orthogonal projectors with outcome labels."""

    projectors: tuple
    labels: tuple

    def __post_init__(self):
        self.projectors = tuple(self.projectors)
        self.labels = tuple(self.labels)
        if not self.projectors:
            raise ValueError("a projective basis needs at least one projector")
        if len(self.labels) != len(self.projectors):
            raise ValueError("labels and projectors must have matching length")
        d = self.projectors[0].dim
        for p in self.projectors:
            if p.dim != d:
                raise ValueError("projectors must share one dimension")
        stack = self.stack
        prod = stack @ stack  # batched P @ P
        if np.max(np.abs(prod - stack)) > PROJECTOR_ATOL:
            raise ValueError("projector fails idempotence within 1e-10")
        if np.max(np.abs(stack.sum(axis=0) - np.eye(d))) > PROJECTOR_ATOL:
            raise ValueError("projectors do not sum to the identity within 1e-10")
        if d <= _PAIRWISE_ORTHO_MAX_DIM:
            for x in range(len(self.projectors)):
                for y in range(x + 1, len(self.projectors)):
                    if np.max(np.abs(stack[x] @ stack[y])) > PROJECTOR_ATOL:
                        raise ValueError(
                            f"projectors {x} and {y} are not orthogonal within 1e-10"
                        )

    @cached_property
    def stack(self) -> np.ndarray:
        """All projectors as one (r, d, d) array."""
        return np.stack([p.matrix for p in self.projectors])

    @property
    def dim(self) -> int:
        return self.projectors[0].dim

    @property
    def size(self) -> int:
        return len(self.projectors)

    @classmethod
    def from_vectors(cls, vectors: np.ndarray, labels) -> "ProjectiveBasis":
        """Rank-1 basis from the orthonormal columns of ``vectors``."""
        v = np.asarray(vectors, dtype=complex)
        stack = np.einsum("ix,jx->xij", v, v.conj())
        return cls(
            projectors=tuple(HermitianOperator(stack[x]) for x in range(v.shape[1])),
            labels=tuple(labels),
        )


def expectation(state: QuantumState, op) -> float:
    """Real expectation value of a Hermitian operator."""
    m = _as_matrix(op)
    if state.is_pure:
        v = state.data
        return float((v.conj() @ (m @ v)).real)
    return float(np.trace(state.data @ m).real)


def variance(state: QuantumState, op) -> float:
    m = _as_matrix(op)
    mean = expectation(state, m)
    return expectation(state, m @ m) - mean**2


def covariance(state: QuantumState, op_a, op_b) -> float:
    """Symmetrized covariance 1/2<AB + BA> - <A><B>."""
    a = _as_matrix(op_a)
    b = _as_matrix(op_b)
    if state.is_pure:
        v = state.data
        cross = (v.conj() @ a @ (b @ v)).real  # Re<AB> = 1/2<AB+BA> for Hermitian A, B
    else:
        cross = np.trace(state.data @ a @ b).real
    return float(cross - expectation(state, a) * expectation(state, b))
