import numpy as np

from phasebound.randoms import (
    gue_hermitian,
    haar_state,
    random_basis,
    random_density,
    random_instance,
    random_unitary,
)
from phasebound.verify import report, run_verification


def test_random_generators_are_valid():
    rng = np.random.default_rng(0)
    for dim in (2, 5, 8):
        psi = haar_state(rng, dim)
        assert abs(np.linalg.norm(psi.data) - 1) < 1e-12
        rho = random_density(rng, dim)
        assert abs(np.trace(rho.data).real - 1) < 1e-12
        h = gue_hermitian(rng, dim)
        assert np.allclose(h.matrix, h.matrix.conj().T)
        u = random_unitary(rng, dim)
        assert np.allclose(u @ u.conj().T, np.eye(dim), atol=1e-12)
        basis = random_basis(rng, dim)
        assert basis.size == dim


def test_random_instance_stream_deterministic():
    a = np.random.default_rng(123)
    b = np.random.default_rng(123)
    sa, ha, _, ta = random_instance(a)
    sb, hb, _, tb = random_instance(b)
    assert ta == tb
    assert np.array_equal(sa.data, sb.data)
    assert np.array_equal(ha.matrix, hb.matrix)


def test_small_verification_run_passes():
    results = run_verification(
        11, n_nonneg=60, n_hierarchy=60, n_two_path=30,
        n_inverse=15, n_derivative=8, n_identity=8,
    )
    assert all(r.ok for r in results)
    text = report(results)
    assert text.count("PASS") == len(results)
    assert "verification passed" in text


def test_verification_report_reproducible():
    kwargs = dict(
        n_nonneg=25, n_hierarchy=25, n_two_path=10,
        n_inverse=5, n_derivative=3, n_identity=3,
    )
    assert report(run_verification(99, **kwargs)) == report(
        run_verification(99, **kwargs)
    )
