"""Linear-algebra layer: Fourier matrix, eigendecomposition, traces, Schmidt."""

import numpy as np
import pytest

from ugame.linalg import (
    PureState,
    assert_density_matrix,
    basis_state,
    dag,
    eig_hermitian,
    fourier_matrix,
    partial_trace,
    schmidt_coefficients,
    trace_norm_hermitian,
)


def _random_hermitian(rng, n):
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (m + m.conj().T)


def _random_unitary(rng, n):
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(m)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_fourier_d2_is_hadamard():
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    assert np.max(np.abs(fourier_matrix(2) - h)) < 1e-12


def test_fourier_d1_is_identity():
    assert np.max(np.abs(fourier_matrix(1) - np.eye(1))) < 1e-15


def test_fourier_d4_unitary_by_direct_multiplication():
    f = fourier_matrix(4)
    assert np.max(np.abs(f @ dag(f) - np.eye(4))) < 1e-12


def test_fourier_unitary_all_small_dims():
    for d in range(2, 17):
        f = fourier_matrix(d)
        assert np.max(np.abs(dag(f) @ f - np.eye(d))) < 1e-12, d


def test_fourier_rejects_nonpositive_dimension():
    with pytest.raises(ValueError):
        fourier_matrix(0)


def test_eig_pauli_x_spectrum():
    sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    w, v = eig_hermitian(sx)
    assert np.max(np.abs(w - np.array([1.0, -1.0]))) < 1e-12
    assert np.max(np.abs(v @ np.diag(w) @ dag(v) - sx)) < 1e-12


def test_eig_diagonal_sorted_descending():
    w, _ = eig_hermitian(np.diag([3.0, 1.0, 2.0]).astype(complex))
    assert np.allclose(w, [3.0, 2.0, 1.0], atol=1e-14)


def test_eig_register_state_halfway_coherence():
    rho = 0.5 * np.array([[1.0, 0.5], [0.5, 1.0]], dtype=complex)
    w, _ = eig_hermitian(rho)
    assert abs(w[0] - 0.75) < 1e-12 and abs(w[1] - 0.25) < 1e-12


def test_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eig_reconstruction_random_matrices():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = int(rng.integers(1, 17))
        m = _random_hermitian(rng, n)
        w, v = eig_hermitian(m)
        assert np.all(np.diff(w) <= 1e-12)
        assert np.max(np.abs(v @ np.diag(w) @ dag(v) - m)) < 1e-10
        assert np.max(np.abs(dag(v) @ v - np.eye(n))) < 1e-10


def test_eig_deterministic_under_degeneracy():
    # identity is maximally degenerate; two calls must agree exactly
    w1, v1 = eig_hermitian(np.eye(3, dtype=complex))
    w2, v2 = eig_hermitian(np.eye(3, dtype=complex))
    assert np.array_equal(w1, w2) and np.array_equal(v1, v2)


def test_trace_norm_simple_cases():
    assert abs(trace_norm_hermitian(np.diag([1.0, -1.0]).astype(complex)) - 2.0) < 1e-14
    assert trace_norm_hermitian(np.zeros((3, 3), dtype=complex)) == 0.0


def test_trace_norm_matches_singular_values():
    rng = np.random.default_rng(11)
    for _ in range(200):
        m = _random_hermitian(rng, int(rng.integers(2, 9)))
        sv = np.linalg.svd(m, compute_uv=False)
        assert abs(trace_norm_hermitian(m) - float(sv.sum())) < 1e-10


def test_partial_trace_product_state():
    rng = np.random.default_rng(3)
    a = _random_hermitian(rng, 2)
    a = a @ dag(a)
    a /= np.trace(a)
    b = _random_hermitian(rng, 3)
    b = b @ dag(b)
    b /= np.trace(b)
    assert np.max(np.abs(partial_trace(np.kron(a, b), (2, 3), keep="A") - a)) < 1e-12
    assert np.max(np.abs(partial_trace(np.kron(a, b), (2, 3), keep="B") - b)) < 1e-12


def test_partial_trace_maximally_entangled():
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1.0 / np.sqrt(2.0)
    rho = np.outer(bell, bell.conj())
    assert np.max(np.abs(partial_trace(rho, (2, 2), keep="B") - np.eye(2) / 2)) < 1e-12


def test_partial_trace_preserves_trace_and_psd():
    rng = np.random.default_rng(19)
    for _ in range(100):
        da, db = int(rng.integers(2, 4)), int(rng.integers(2, 5))
        m = _random_hermitian(rng, da * db)
        m = m @ dag(m)
        m /= np.trace(m)
        for keep in ("A", "B"):
            red = partial_trace(m, (da, db), keep=keep)
            assert abs(np.trace(red).real - 1.0) < 1e-10
            assert np.linalg.eigvalsh(red)[0] >= -1e-10


def test_partial_trace_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        partial_trace(np.eye(6, dtype=complex), (2, 2), keep="A")


def test_schmidt_maximally_entangled_and_product():
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1.0 / np.sqrt(2.0)
    s = schmidt_coefficients(PureState(bell), (2, 2))
    assert np.max(np.abs(s - 1.0 / np.sqrt(2.0))) < 1e-12
    s = schmidt_coefficients(PureState(np.kron(basis_state(2, 0), basis_state(2, 0))), (2, 2))
    assert abs(s[0] - 1.0) < 1e-12 and abs(s[1]) < 1e-12


def test_schmidt_local_unitary_invariance():
    rng = np.random.default_rng(23)
    for _ in range(50):
        da, db = 2, int(rng.integers(2, 6))
        psi = rng.standard_normal(da * db) + 1j * rng.standard_normal(da * db)
        psi /= np.linalg.norm(psi)
        u = np.kron(_random_unitary(rng, da), _random_unitary(rng, db))
        s0 = schmidt_coefficients(psi, (da, db))
        s1 = schmidt_coefficients(u @ psi, (da, db))
        assert np.max(np.abs(s0 - s1)) < 1e-10
        assert abs(float(np.sum(s0**2)) - 1.0) < 1e-10


def test_pure_state_canonical_phase():
    a = PureState.normalized([1.0, 1.0j])
    b = PureState.normalized([1.0j, -1.0])  # same ray, rotated phase
    assert a == b
    assert hash(a) == hash(b)
    assert a.amplitudes[0].imag == 0.0 and a.amplitudes[0].real > 0.0


def test_pure_state_rejects_bad_norm():
    with pytest.raises(ValueError):
        PureState([1.0, 1.0])
    with pytest.raises(ValueError):
        PureState.normalized([0.0, 0.0])


def test_density_matrix_validation():
    assert_density_matrix(np.eye(2, dtype=complex) / 2)
    with pytest.raises(ValueError):
        assert_density_matrix(np.eye(2, dtype=complex))  # trace 2
    with pytest.raises(ValueError):
        assert_density_matrix(np.diag([1.5, -0.5]).astype(complex))  # not PSD
