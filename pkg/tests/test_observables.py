import numpy as np
import pytest

from phasebound.bounds import enhanced_sensitivity
from phasebound.observables import (
    ObservableCoefficients,
    ablated_observable,
    assemble_observable,
    normalize_coefficients,
    x_opt,
    x_opt0,
)
from phasebound.operators import (
    ProjectiveBasis,
    QuantumState,
    variance,
)
from phasebound.randoms import random_instance
from phasebound.spin import jy_basis, make_spin_operators, oat_state, phase_evolve

SZ = np.diag([1.0, -1.0]).astype(complex)


def _commutator_mean(state, h, x):
    v = state.data
    if state.is_pure:
        return 2.0 * float((v.conj() @ x @ (h @ v)).imag)
    return 2.0 * float(np.trace(v @ x @ h).imag)


def test_coefficient_container_validation():
    ObservableCoefficients(c_h=0.6, c_proj=[0.8], normalized=True)
    with pytest.raises(ValueError):
        ObservableCoefficients(c_h=1.0, c_proj=[1.0], normalized=True)


def test_assemble_observable_shape_check():
    u = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    basis = ProjectiveBasis.from_vectors(u.astype(complex), (0, 1))
    coeffs = ObservableCoefficients(c_h=0.0, c_proj=[1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        assemble_observable(coeffs, SZ, basis)
    op = assemble_observable(
        ObservableCoefficients(c_h=0.5, c_proj=[1.0, -1.0], offset=2.0), SZ, basis
    )
    # offset shifts the trace only
    assert np.trace(op.matrix).real == pytest.approx(2.0 * 2.0, abs=1e-12)


def test_normalize_coefficients():
    raw = ObservableCoefficients(c_h=-3.0, c_proj=[0.0, -4.0])
    normed = normalize_coefficients(raw)
    total = normed.c_h**2 + np.sum(normed.c_proj**2)
    assert total == pytest.approx(1.0, abs=1e-12)
    # the largest-magnitude coefficient ends up positive
    stacked = np.concatenate([[normed.c_h], normed.c_proj])
    assert stacked[np.argmax(np.abs(stacked))] > 0
    with pytest.raises(ValueError):
        normalize_coefficients(ObservableCoefficients(c_h=0.0, c_proj=[0.0]))


def test_identities_on_random_instances():
    rng = np.random.default_rng(19)
    for _ in range(25):
        state, h, basis, theta = random_instance(rng)
        br = enhanced_sensitivity(state, h, basis, theta)
        st = phase_evolve(state, h, theta)
        for builder, target in ((x_opt, br.f_plus_e), (x_opt0, br.f)):
            op, _ = builder(state, h, basis, theta)
            scale = max(abs(target), 1.0)
            assert abs(variance(st, op) - target) / scale <= 1e-8
            assert (
                abs(_commutator_mean(st, h.matrix, op.matrix) - target) / scale
                <= 1e-8
            )


def test_identities_on_twisted_spin_state():
    j = 10
    spin = make_spin_operators(j)
    basis = jy_basis(j)
    state = oat_state(j, 0.9 / np.sqrt(j))
    br = enhanced_sensitivity(state, spin.Jz, basis, 0.0)
    op, coeffs = x_opt(state, spin.Jz, basis, 0.0)
    assert variance(state, op) == pytest.approx(br.f_plus_e, rel=1e-8)
    op0, coeffs0 = x_opt0(state, spin.Jz, basis, 0.0)
    assert variance(state, op0) == pytest.approx(br.f, rel=1e-8)
    assert coeffs0.c_h == 0.0
    assert coeffs.c_h != 0.0


def test_x_opt0_vanishes_for_commuting_basis():
    j = 3
    spin = make_spin_operators(j)
    d = spin.Jz.dim
    eye = np.eye(d, dtype=complex)
    basis = ProjectiveBasis.from_vectors(eye, tuple(range(d)))
    amps = np.arange(1, d + 1, dtype=complex)
    state = QuantumState.pure(amps / np.linalg.norm(amps))
    _, coeffs = x_opt0(state, spin.Jz, basis, 0.3)
    assert np.allclose(coeffs.c_proj, 0.0, atol=1e-12)


def test_ablated_observable_loses_sensitivity():
    j = 10
    spin = make_spin_operators(j)
    basis = jy_basis(j)
    tau = 0.9 / np.sqrt(j)
    state = oat_state(j, tau)
    br = enhanced_sensitivity(state, spin.Jz, basis, 0.0)
    op_abl, chi_inv2 = ablated_observable(state, spin.Jz, basis, 0.0)
    op_full, _ = x_opt(state, spin.Jz, basis, 0.0)
    comm_abl = _commutator_mean(state, spin.Jz.matrix, op_abl.matrix)
    comm_full = _commutator_mean(state, spin.Jz.matrix, op_full.matrix)
    # dropping the generator term leaves the gradient untouched...
    assert comm_abl == pytest.approx(comm_full, abs=1e-9 * max(1, abs(comm_full)))
    # ...but inflates the variance, collapsing the sensitivity below F
    assert chi_inv2 < br.f
    assert br.e > 0
