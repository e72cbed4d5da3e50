"""Dense complex linear algebra for dimensions up to 6.

Hermitian eigendecomposition with a deterministic eigenvector gauge,
partial transposition over a declared tensor split, and summation of
negative eigenvalues.  Everything here is a pure function over
immutable inputs and safe for parallel sweep workers.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .model import HermitianMatrix

__all__ = [
    "EigenDecomposition",
    "TensorSplit",
    "eigendecompose_hermitian",
    "partial_transpose",
    "negative_eigenvalue_sum",
]

# components smaller than this are skipped when picking the gauge pivot
_PHASE_FLOOR = 1e-12


@dataclasses.dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues ascending; column k of eigenvectors pairs with eigenvalue k."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self) -> None:
        lam = np.array(self.eigenvalues, dtype=float)
        vec = np.array(self.eigenvectors, dtype=complex)
        lam.flags.writeable = False
        vec.flags.writeable = False
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "eigenvectors", vec)


@dataclasses.dataclass(frozen=True)
class TensorSplit:
    """Ordered subsystem dimensions of a tensor-product index layout."""

    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"dims must be positive integers, got {self.dims!r}")
        object.__setattr__(self, "dims", dims)

    @property
    def total_dim(self) -> int:
        out = 1
        for d in self.dims:
            out *= d
        return out


def _as_matrix(h) -> np.ndarray:
    """Accept HermitianMatrix, DensityMatrix-like, or a raw array.

    Raw arrays are validated through HermitianMatrix, so non-Hermitian
    input fails here with the same error as everywhere else.
    """
    inner = getattr(h, "matrix", h)
    if isinstance(h, HermitianMatrix):
        return inner
    return HermitianMatrix(np.asarray(inner, dtype=complex)).matrix


def eigendecompose_hermitian(h) -> EigenDecomposition:
    """Spectral decomposition with a deterministic eigenvector gauge.

    Eigenvalues ascend.  Each eigenvector is rotated so that its first
    component of magnitude above 1e-12 is real and positive, which pins
    the otherwise arbitrary phase and makes repeated runs bit-identical.
    Within a degenerate subspace only orthonormality is guaranteed, not
    any particular basis.
    """
    m = _as_matrix(h)
    eigenvalues, vectors = np.linalg.eigh(m)
    vectors = vectors.copy()
    for k in range(vectors.shape[1]):
        column = vectors[:, k]
        big = np.flatnonzero(np.abs(column) > _PHASE_FLOOR)
        if big.size:
            pivot = column[big[0]]
            column *= np.abs(pivot) / pivot
    return EigenDecomposition(eigenvalues, vectors)


def partial_transpose(rho, split: TensorSplit, subsystem: int) -> HermitianMatrix:
    """Transpose the indices of one subsystem of a density matrix.

    The matrix is reshaped to one (row, column) index pair per
    subsystem and the pair of the chosen subsystem is swapped.  The
    operation is an exact involution, preserves the trace, and maps
    Hermitian input to Hermitian output entry for entry.
    """
    m = np.asarray(getattr(rho, "matrix", rho), dtype=complex)
    dims = split.dims
    total = split.total_dim
    if m.shape != (total, total):
        raise ValueError(
            f"matrix shape {m.shape} does not match split dims {dims} (total {total})"
        )
    k = len(dims)
    if not 0 <= subsystem < k:
        raise ValueError(f"subsystem index {subsystem} out of range for {k} subsystems")
    tensor = m.reshape(dims + dims)
    axes = list(range(2 * k))
    axes[subsystem], axes[k + subsystem] = axes[k + subsystem], axes[subsystem]
    return HermitianMatrix(tensor.transpose(axes).reshape(total, total))


def negative_eigenvalue_sum(m) -> float:
    """Absolute sum of the negative eigenvalues; 0 for PSD input."""
    eigenvalues = eigendecompose_hermitian(m).eigenvalues
    return float(-eigenvalues[eigenvalues < 0.0].sum())
