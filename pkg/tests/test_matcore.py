import numpy as np
import pytest

from coherify.errors import DimensionMismatch, NotHermitian
from coherify.matcore import (
    eig_hermitian,
    kron,
    partial_trace,
    reshuffle,
    unvectorize,
    vectorize,
)


def rand_hermitian(d, rng):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def quadratic_eigs(h):
    # independent oracle for 2x2 real symmetric matrices
    a, b, c = h[0, 0].real, h[1, 1].real, h[0, 1]
    tr, det = a + b, a * b - abs(c) ** 2
    disc = np.sqrt(tr ** 2 - 4 * det)
    return np.array([(tr + disc) / 2, (tr - disc) / 2])


def test_eig_identity():
    dec = eig_hermitian(np.eye(2))
    assert np.allclose(dec.eigenvalues, [1.0, 1.0])


def test_eig_involution():
    dec = eig_hermitian(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(dec.eigenvalues, [1.0, -1.0])


def test_eig_2x2_quadratic_oracle():
    h = np.array([[0.7, 0.1], [0.1, 0.3]])
    expected = quadratic_eigs(h)
    assert np.abs(expected - [(1 + np.sqrt(0.2)) / 2, (1 - np.sqrt(0.2)) / 2]).max() < 1e-15
    dec = eig_hermitian(h)
    assert np.abs(dec.eigenvalues - expected).max() < 1e-12


def test_eig_invariants_random():
    rng = np.random.default_rng(0)
    for d in (2, 3, 4, 9):
        h = rand_hermitian(d, rng)
        dec = eig_hermitian(h)
        assert abs(dec.eigenvalues.sum() - np.trace(h).real) < 1e-9
        assert abs((dec.eigenvalues ** 2).sum() - (np.abs(h) ** 2).sum()) < 1e-9
        v = dec.eigenvectors
        recon = (v * dec.eigenvalues) @ v.conj().T
        norm = max(1.0, np.linalg.norm(h))
        assert np.linalg.norm(recon - h) <= 1e-10 * norm
        assert np.abs(v.conj().T @ v - np.eye(d)).max() < 1e-10
        assert np.all(np.diff(dec.eigenvalues) <= 1e-12)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_vectorize_row_major():
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(vectorize(m), [1, 2, 3, 4])
    assert np.array_equal(vectorize(np.eye(3)), [1, 0, 0, 0, 1, 0, 0, 0, 1])
    assert np.array_equal(unvectorize(np.array([1, 2, 3, 4]), 2), m)
    with pytest.raises(DimensionMismatch):
        unvectorize(np.arange(3))


def test_reshuffle_involution_and_index_formula():
    rng = np.random.default_rng(1)
    for d in (2, 3):
        x = rng.standard_normal((d * d, d * d)) + 1j * rng.standard_normal((d * d, d * d))
        assert np.abs(reshuffle(reshuffle(x)) - x).max() < 1e-15
    # matrix unit at row (i=1,j=1), col (k=2,l=2) (1-based) moves to
    # row (i=1,k=2), col (j=1,l=2)
    e = np.zeros((4, 4))
    e[0 * 2 + 0, 1 * 2 + 1] = 1.0
    out = reshuffle(e)
    expected = np.zeros((4, 4))
    expected[0 * 2 + 1, 0 * 2 + 1] = 1.0
    assert np.array_equal(out, expected)


def test_reshuffle_unitary_kron_is_rank_one():
    # rotation with all entries of modulus 1/sqrt(2)
    u = np.array([[1.0, -1.0], [1.0, 1.0]]) / np.sqrt(2)
    r = reshuffle(kron(u, u.conj()))
    w = np.linalg.eigvalsh((r + r.conj().T) / 2)
    assert (np.abs(w) > 1e-12).sum() == 1
    assert abs(np.trace(r) / 2 - 1.0) < 1e-12
    v = vectorize(u)
    assert np.abs(r - np.outer(v, v.conj())).max() < 1e-12


def test_partial_trace_examples():
    # maximally entangled state: trace over the first factor gives 1/2 identity
    omega = np.zeros(4, dtype=complex)
    omega[0] = omega[3] = 1.0
    j = np.outer(omega, omega.conj()) / 2
    assert np.abs(partial_trace(j, 2, "first") - np.eye(2) / 2).max() < 1e-15

    rng = np.random.default_rng(2)
    a = rand_hermitian(2, rng)
    a = a / np.trace(a)
    b = rand_hermitian(2, rng)
    assert np.abs(partial_trace(kron(a, b), 2, "first") - b).max() < 1e-12
    sigma = rand_hermitian(3, rng)
    x = kron(sigma, np.eye(3) / 3)
    assert np.abs(partial_trace(x, 3, "second") - sigma).max() < 1e-12


def test_partial_trace_preserves_trace():
    rng = np.random.default_rng(3)
    for d in (2, 3):
        x = rng.standard_normal((d * d, d * d)) + 1j * rng.standard_normal((d * d, d * d))
        for sub in ("first", "second"):
            assert abs(np.trace(partial_trace(x, d, sub)) - np.trace(x)) < 1e-12


def test_kron_basics():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(kron(np.diag([1.0, 0.0]), np.eye(2)), np.diag([1.0, 1.0, 0.0, 0.0]))
    rng = np.random.default_rng(4)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    assert abs(np.linalg.norm(kron(a, b)) - np.linalg.norm(a) * np.linalg.norm(b)) < 1e-12
