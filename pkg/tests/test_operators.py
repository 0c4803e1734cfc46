import numpy as np
import pytest

from phasebound.operators import (
    HermitianOperator,
    ProjectiveBasis,
    QuantumState,
    covariance,
    expectation,
    variance,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)


def test_hermitian_validation():
    HermitianOperator(SX)
    with pytest.raises(ValueError):
        HermitianOperator(np.array([[0, 1], [0, 0]], dtype=complex))
    with pytest.raises(ValueError):
        HermitianOperator(np.zeros((2, 3)))


def test_pure_state_normalization():
    QuantumState.pure([1, 0])
    with pytest.raises(ValueError):
        QuantumState.pure([1, 1])


def test_mixed_state_validation():
    QuantumState.mixed(np.eye(3) / 3)
    with pytest.raises(ValueError):
        QuantumState.mixed(np.eye(3))  # trace 3
    with pytest.raises(ValueError):
        QuantumState.mixed(np.diag([1.5, -0.5]))  # negative eigenvalue


def test_density_representation():
    psi = QuantumState.pure([1 / np.sqrt(2), 1j / np.sqrt(2)])
    rho = psi.density()
    assert np.allclose(rho, rho.conj().T)
    assert np.trace(rho).real == pytest.approx(1.0)


def test_projective_basis_validation():
    up = HermitianOperator(np.diag([1.0, 0.0]).astype(complex))
    dn = HermitianOperator(np.diag([0.0, 1.0]).astype(complex))
    ProjectiveBasis(projectors=(up, dn), labels=(0, 1))
    with pytest.raises(ValueError):
        ProjectiveBasis(projectors=(up, up), labels=(0, 1))  # not complete
    with pytest.raises(ValueError):
        ProjectiveBasis(projectors=(up, dn), labels=(0,))


def test_from_vectors():
    u = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    basis = ProjectiveBasis.from_vectors(u.astype(complex), ("plus", "minus"))
    assert basis.size == 2 and basis.dim == 2
    assert np.allclose(basis.stack.sum(axis=0), np.eye(2))


def test_expectation_variance_covariance_pure_vs_mixed():
    rng = np.random.default_rng(7)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v /= np.linalg.norm(v)
    pure = QuantumState.pure(v)
    mixed = QuantumState.mixed(np.outer(v, v.conj()))
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    a = (a + a.conj().T) / 2
    b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    b = (b + b.conj().T) / 2
    assert expectation(pure, a) == pytest.approx(expectation(mixed, a), abs=1e-12)
    assert variance(pure, a) == pytest.approx(variance(mixed, a), abs=1e-11)
    assert covariance(pure, a, b) == pytest.approx(covariance(mixed, a, b), abs=1e-11)
    # qubit sanity: Var(sz) on |+> is 1
    plus = QuantumState.pure(np.array([1, 1]) / np.sqrt(2))
    assert variance(plus, SZ) == pytest.approx(1.0, abs=1e-12)
    assert covariance(plus, SZ, SZ) == pytest.approx(variance(plus, SZ), abs=1e-12)
