import numpy as np
import pytest

from coherify.channels import (
    Channel,
    apply,
    c2_split,
    channel_coherence_2norm,
    channel_coherence_entropic,
    channel_entropy,
    channel_from_kraus,
    channel_purity,
    classical_action,
    classical_action_kraus,
    classical_channel,
    decohere_channel,
    identity_channel,
    kraus_from_channel,
    unitary_channel,
)
from coherify.errors import NotTracePreserving
from coherify.states import fourier_matrix, spectrum


# the worked 3x3 example and its row-grouped Kraus operators
T_EXAMPLE = np.array([[0.7, 0.2, 0.6], [0.1, 0.6, 0.4], [0.2, 0.2, 0.0]])
K_EXAMPLE = [
    np.array([[np.sqrt(0.7), 0, 0], [0, np.sqrt(0.6), 0], [np.sqrt(0.2), 0, 0]]),
    np.array([[0, 0, np.sqrt(0.6)], [0, 0, np.sqrt(0.4)], [0, np.sqrt(0.2), 0]]),
    np.array([[0, np.sqrt(0.2), 0], [np.sqrt(0.1), 0, 0], [0, 0, 0]]),
]


def rand_channel(d, rng, rank=None):
    from coherify.oracle import rand_channel as rc

    return rc(d, rng, rank)


def test_identity_channel():
    ch = identity_channel(2)
    omega = np.zeros(4, dtype=complex)
    omega[0] = omega[3] = 1.0
    assert np.abs(ch.jam - np.outer(omega, omega.conj()) / 2).max() < 1e-12
    assert abs(channel_purity(ch) - 1.0) < 1e-12


def test_kraus_example_spectrum():
    ch = channel_from_kraus(K_EXAMPLE)
    assert np.abs(spectrum(ch.jam)[:3] - [0.5, 0.4, 0.1]).max() < 1e-12
    assert np.abs(classical_action(ch) - T_EXAMPLE).max() < 1e-12


def test_contract_channel_jam():
    # both basis states sent to the first one
    kraus = [np.array([[1.0, 0.0], [0.0, 0.0]]), np.array([[0.0, 1.0], [0.0, 0.0]])]
    ch = channel_from_kraus(kraus)
    expected = np.kron(np.diag([1.0, 0.0]), np.eye(2) / 2)
    assert np.abs(ch.jam - expected).max() < 1e-12


def test_not_trace_preserving():
    with pytest.raises(NotTracePreserving):
        channel_from_kraus([np.eye(2) * 0.5])


def test_kraus_from_channel_identity():
    ops = kraus_from_channel(identity_channel(3))
    assert len(ops) == 1
    assert np.abs(ops[0] - np.eye(3)).max() < 1e-10


def test_kraus_from_channel_depolarizing():
    d = 2
    ch = classical_channel(np.full((d, d), 1.0 / d))
    ops = kraus_from_channel(ch)
    assert len(ops) == 4
    for k in ops:
        assert abs(np.trace(k @ k.conj().T).real - d * 0.25) < 1e-10


def test_kraus_count_capped():
    rng = np.random.default_rng(20)
    kraus = []
    for _ in range(5):
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        kraus.append(g)
    # normalize to trace preserving
    s = sum(k.conj().T @ k for k in kraus)
    w, v = np.linalg.eigh(s)
    s_isqrt = (v / np.sqrt(w)) @ v.conj().T
    kraus = [k @ s_isqrt for k in kraus]
    ch = channel_from_kraus(kraus)
    assert len(kraus_from_channel(ch)) <= 4


def test_kraus_orthogonality_and_weights():
    rng = np.random.default_rng(21)
    ch = rand_channel(3, rng)
    ops = kraus_from_channel(ch)
    lam = spectrum(ch.jam)
    for i, ki in enumerate(ops):
        assert abs(np.trace(ki @ ki.conj().T).real - 3 * lam[i]) < 1e-9
        for j, kj in enumerate(ops):
            if i != j:
                assert abs(np.trace(ki.conj().T @ kj)) < 1e-9


def test_roundtrip_random():
    rng = np.random.default_rng(22)
    for d in (2, 3):
        ch = rand_channel(d, rng)
        ch2 = channel_from_kraus(kraus_from_channel(ch))
        assert np.abs(ch2.jam - ch.jam).max() < 1e-8


def test_apply():
    rho = np.array([[0.6, 0.2], [0.2, 0.4]], dtype=complex)
    assert np.abs(apply(identity_channel(2), rho) - rho).max() < 1e-12
    dep = classical_channel(np.full((2, 2), 0.5))
    assert np.abs(apply(dep, rho) - np.eye(2) / 2).max() < 1e-12


def test_classical_action_routes():
    rng = np.random.default_rng(23)
    for d in (2, 3):
        ch = rand_channel(d, rng)
        t1 = classical_action(ch)
        t2 = classical_action_kraus(ch.kraus)
        assert np.abs(t1 - t2).max() < 1e-9
        assert np.abs(t1.sum(axis=0) - 1.0).max() < 1e-9
        # diagonal encodes T entrywise
        for i in range(d):
            for j in range(d):
                assert abs(d * ch.jam[i * d + j, i * d + j].real - t1[i, j]) < 1e-10


def test_unitary_classical_action_is_hadamard_square():
    rng = np.random.default_rng(24)
    g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    u, _ = np.linalg.qr(g)
    ch = unitary_channel(u)
    assert np.abs(classical_action(ch) - np.abs(u) ** 2).max() < 1e-10


def test_decohere_channel():
    rng = np.random.default_rng(25)
    ch = rand_channel(2, rng)
    dec = decohere_channel(ch)
    assert np.abs(dec.jam - np.diag(np.diag(dec.jam))).max() == 0
    assert np.abs(classical_action(dec) - classical_action(ch)).max() < 1e-10
    dec2 = decohere_channel(dec)
    assert np.abs(dec2.jam - dec.jam).max() == 0
    # a unitary decoheres to the classical channel of its transition matrix
    u = fourier_matrix(2)
    dec = decohere_channel(unitary_channel(u))
    expected = classical_channel(np.abs(u) ** 2)
    assert np.abs(dec.jam - expected.jam).max() < 1e-12


def test_entropy_purity_extremes():
    d = 2
    uni = unitary_channel(fourier_matrix(d))
    assert abs(channel_entropy(uni)) < 1e-9
    assert abs(channel_purity(uni) - 1.0) < 1e-12
    dep = classical_channel(np.full((d, d), 1.0 / d))
    assert abs(channel_entropy(dep) - 2 * np.log2(d)) < 1e-10
    assert abs(channel_purity(dep) - 1.0 / d ** 2) < 1e-12
    # contraction to a pure state: gamma = 1/d
    contract = channel_from_kraus(
        [np.array([[1.0, 0.0], [0.0, 0.0]]), np.array([[0.0, 1.0], [0.0, 0.0]])]
    )
    assert abs(channel_purity(contract) - 1.0 / d) < 1e-12


def test_coherence_values():
    # identity channel, d=2: C_e = 1 bit, C_2 = 1 - 2/4
    ch = identity_channel(2)
    assert abs(channel_coherence_entropic(ch) - 1.0) < 1e-9
    assert abs(channel_coherence_2norm(ch) - 0.5) < 1e-12
    # Fourier channel, d=2: C_e = 2 bits, C_2 = 3/4
    ch = unitary_channel(fourier_matrix(2))
    assert abs(channel_coherence_entropic(ch) - 2.0) < 1e-9
    assert abs(channel_coherence_2norm(ch) - 0.75) < 1e-12
    # classical channels carry no coherence
    ch = classical_channel(T_EXAMPLE)
    assert channel_coherence_entropic(ch) < 1e-9
    assert channel_coherence_2norm(ch) < 1e-12


def test_c2_split():
    rng = np.random.default_rng(26)
    for d in (2, 3):
        ch = rand_channel(d, rng)
        dpart, cpart = c2_split(ch)
        assert dpart >= 0 and cpart >= 0
        assert abs(dpart + cpart - channel_coherence_2norm(ch)) < 1e-12


def test_single_kraus_iff_unit_purity():
    rng = np.random.default_rng(27)
    for _ in range(5):
        ch = rand_channel(2, rng)
        single = len(kraus_from_channel(ch)) == 1
        assert single == (abs(channel_purity(ch) - 1.0) < 1e-9)
    g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    u, _ = np.linalg.qr(g)
    assert len(kraus_from_channel(unitary_channel(u))) == 1


def test_channel_validation():
    with pytest.raises(ValueError):
        Channel(np.eye(4))  # trace d, not 1
    bad = np.diag([1.0, 0.0, 0.0, 0.0])  # wrong partial trace
    with pytest.raises(ValueError):
        Channel(bad)
