"""Dense complex linear algebra primitives for small matrices.

Everything here operates on plain numpy arrays of complex128. Matrices are
kept small by design (dimension at most 64, i.e. channels on systems of
dimension at most 8), so no attention is paid to sparsity or scaling.

Index conventions used throughout the package: a matrix on a d*d-dimensional
composite space carries row index (i, k) = i*d + k and column index
(j, l) = j*d + l, with the first tensor factor the *output* slot and the
second the *input* slot of a channel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian

MAX_DIM = 64


def dag(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def hermitize(a: np.ndarray) -> np.ndarray:
    """Hermitian part (a + a^dag) / 2."""
    return (a + dag(a)) / 2


def as_complex_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite complex128 2-d array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-dimensional, got shape {m.shape}")
    if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise DimensionMismatch(f"{name} contains non-finite entries")
    return m


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigensystem of a Hermitian matrix.

    eigenvalues are real and sorted non-increasingly; eigenvectors is the
    unitary whose columns match the eigenvalue ordering.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eig_hermitian(h: np.ndarray, atol: float = 1e-10) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.

    The input is symmetrized when its anti-Hermitian part is below ``atol``
    (absorbing round-off) and rejected otherwise.
    """
    h = as_complex_matrix(h, "H")
    n, m = h.shape
    if n != m:
        raise DimensionMismatch(f"expected a square matrix, got {h.shape}")
    if n > MAX_DIM:
        raise DimensionMismatch(f"dimension {n} exceeds supported maximum {MAX_DIM}")
    asym = np.abs(h - dag(h)).max()
    if asym > atol:
        raise NotHermitian(f"matrix is not Hermitian: max|H - H^dag| = {asym:.3e}")
    try:
        w, v = np.linalg.eigh(hermitize(h))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    order = np.argsort(-w, kind="stable")
    return EigenDecomposition(eigenvalues=w[order], eigenvectors=v[:, order])


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def vectorize(m: np.ndarray) -> np.ndarray:
    """Row-major (row-wise) vectorization of a square matrix."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m.reshape(-1)


def unvectorize(v: np.ndarray, d: int | None = None) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    v = np.asarray(v).reshape(-1)
    if d is None:
        d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise DimensionMismatch(f"vector of length {v.size} is not d*d with d={d}")
    return v.reshape(d, d)


def _split_dim(x: np.ndarray, d: int | None) -> int:
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {x.shape}")
    n = x.shape[0]
    if d is None:
        d = int(round(np.sqrt(n)))
    if d * d != n:
        raise DimensionMismatch(f"dimension {n} is not a perfect square matching d={d}")
    return d


def reshuffle(x: np.ndarray, d: int | None = None) -> np.ndarray:
    """Reshuffling X^R: output entry at ((i,k),(j,l)) is the input at ((i,j),(k,l)).

    An involution on matrices of size d^2.
    """
    x = as_complex_matrix(x, "X")
    d = _split_dim(x, d)
    return x.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)


def partial_trace(x: np.ndarray, d: int | None = None, subsystem: str = "first") -> np.ndarray:
    """Partial trace of a d^2 x d^2 matrix over the named tensor factor."""
    x = as_complex_matrix(x, "X")
    d = _split_dim(x, d)
    x4 = x.reshape(d, d, d, d)
    if subsystem == "first":
        return np.einsum("akal->kl", x4)
    if subsystem == "second":
        return np.einsum("akbk->ab", x4)
    raise ValueError(f"subsystem must be 'first' or 'second', got {subsystem!r}")
