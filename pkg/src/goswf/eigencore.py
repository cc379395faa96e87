"""Dense and banded symmetric/Hermitian eigensolvers with a fixed sign convention.

Thin layer over LAPACK (numpy/scipy). What it adds is determinism: eigenpairs
come back sorted ascending and each eigenvector is scaled so that its
largest-magnitude component is real and positive.
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

__all__ = ["EigenSolverError", "EigenDecomposition", "sym_eig", "sym_eig_banded", "herm_eig"]


class EigenSolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (ascending) and matching orthonormal eigenvectors as columns."""

    values: np.ndarray
    vectors: np.ndarray

    def __len__(self):
        return len(self.values)

    def descending(self):
        return EigenDecomposition(self.values[::-1].copy(), self.vectors[:, ::-1].copy())


def _fix_phase(vectors):
    # first index wins on ties, so the choice is reproducible
    idx = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    phase = pivots / np.abs(pivots)
    return vectors / phase


def _freeze(values, vectors):
    values = np.ascontiguousarray(values)
    vectors = np.ascontiguousarray(vectors)
    values.flags.writeable = False
    vectors.flags.writeable = False
    return EigenDecomposition(values, vectors)


def sym_eig(m):
    """Full eigendecomposition of a real symmetric matrix.

    ``m`` must be exactly symmetric as stored.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.array_equal(m, m.T):
        raise ValueError("matrix is not exactly symmetric")
    try:
        values, vectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"symmetric eigensolver failed: {exc}") from exc
    return _freeze(values, _fix_phase(vectors))


def sym_eig_banded(bands):
    """Eigendecomposition of a symmetric banded matrix in lower band storage.

    ``bands[d, j]`` holds ``A[j + d, j]`` (LAPACK lower form), so ``bands[0]``
    is the diagonal and ``bands.shape[0] - 1`` is the bandwidth.
    """
    bands = np.asarray(bands, dtype=float)
    try:
        values, vectors = linalg.eig_banded(bands, lower=True)
    except linalg.LinAlgError as exc:
        raise EigenSolverError(f"banded eigensolver failed: {exc}") from exc
    return _freeze(values, _fix_phase(vectors))


def herm_eig(m):
    """Eigendecomposition of a complex Hermitian matrix (real eigenvalues)."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.array_equal(m, m.conj().T):
        raise ValueError("matrix is not exactly Hermitian")
    try:
        values, vectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"Hermitian eigensolver failed: {exc}") from exc
    return _freeze(values, _fix_phase(vectors))


def to_lower_bands(m, bandwidth):
    """Pack the lower triangle of a symmetric matrix into LAPACK band storage."""
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    bands = np.zeros((bandwidth + 1, n))
    for d in range(bandwidth + 1):
        bands[d, : n - d] = np.diagonal(m, -d)
    return bands
