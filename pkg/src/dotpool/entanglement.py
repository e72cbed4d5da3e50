"""Entanglement measures for the dot-pool partitions.

Pure bipartite concurrence, the tripartite concurrence built from the
three single-subsystem purities, the reduced density matrices, Wootters
concurrence / entanglement of formation for the two-dot mixed state,
negativity for both reductions, and the convex-expansion entanglement
of formation of the pool-dot (qutrit-qubit) state.

Two routes coexist deliberately.  The scalar operations go through the
authoritative matrix machinery (spin-flip spectrum, partial-transpose
eigensolver).  ``measure_series`` evaluates whole trajectories with
closed-form expressions in the amplitude moduli; those expressions are
pinned to the matrix route by the test suite at 1e-10, which is what
makes the fast path trustworthy.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .dynamics import PureState, TrajectorySeries
from .linalg import TensorSplit, negative_eigenvalue_sum, partial_transpose

__all__ = [
    "DensityMatrix",
    "MeasureRecord",
    "MEASURES",
    "concurrence_pure_bipartite",
    "reduced_density_matrices",
    "concurrence_tripartite",
    "trace_out_pool",
    "trace_out_qubit",
    "wootters_lambdas",
    "concurrence_mixed_two_qubit",
    "eof_from_concurrence",
    "negativity",
    "eof_qubit_qutrit",
    "measure_series",
]

# canonical measure names, also the CLI vocabulary
MEASURES = (
    "concurrence",
    "concurrence_tripartite",
    "eof_two_qubit",
    "negativity_two_qubit",
    "eof_qubit_qutrit",
    "negativity_qubit_qutrit",
)

TRIPARTITE_CEILING = math.sqrt(5.0 / 3.0)

_TOL = 1e-12


@dataclasses.dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive-semidefinite, unit-trace operator."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        trace = complex(np.trace(m))
        if abs(trace - 1.0) > _TOL:
            raise ValueError(f"trace must be 1 within 1e-12, got {trace}")
        scale = max(1.0, float(np.linalg.norm(m)))
        if np.linalg.norm(m - m.conj().T) > _TOL * scale:
            raise ValueError("density matrix must be Hermitian within 1e-12")
        smallest = float(np.linalg.eigvalsh(m)[0])
        if smallest < -1e-10:
            raise ValueError(f"density matrix must be PSD, minimal eigenvalue {smallest:.3e}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclasses.dataclass(frozen=True)
class MeasureRecord:
    """Bundle of per-time measure values; fields are None when not requested."""

    concurrence_pure: float | None = None
    concurrence_tripartite: float | None = None
    eof_two_qubit: float | None = None
    negativity_two_qubit: float | None = None
    eof_qubit_qutrit: float | None = None
    negativity_qubit_qutrit: float | None = None

    def __post_init__(self) -> None:
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if value is None:
                continue
            if value < 0.0:
                raise ValueError(f"{field.name} must be nonnegative, got {value}")
        if self.concurrence_pure is not None and self.concurrence_pure > 1.0 + 1e-10:
            raise ValueError(f"concurrence_pure exceeds 1: {self.concurrence_pure}")
        if (
            self.concurrence_tripartite is not None
            and self.concurrence_tripartite > TRIPARTITE_CEILING + 1e-10
        ):
            raise ValueError(
                f"concurrence_tripartite exceeds sqrt(5/3): {self.concurrence_tripartite}"
            )


def _amps(psi: PureState, dim: int, name: str) -> np.ndarray:
    if psi.dim != dim:
        raise ValueError(f"{name} needs a {dim}-dim state, got {psi.dim}-dim")
    return psi.amplitudes


def concurrence_pure_bipartite(psi: PureState) -> float:
    """C = 2|c1 c2| for the one-dot pure state, in [0, 1]."""
    c1, c2 = _amps(psi, 2, "concurrence_pure_bipartite")
    return float(2.0 * abs(c1) * abs(c2))


def reduced_density_matrices(psi: PureState) -> tuple[DensityMatrix, DensityMatrix, DensityMatrix]:
    """Single-subsystem reductions (pool qutrit, left dot, right dot).

    Particle-number conservation kills every off-diagonal element, so
    all three are diagonal:
      rho_pool  = diag(|c1|^2, |c2|^2 + |c3|^2, |c4|^2)   over {|n+1>, |n>, |n-1>}
      rho_left  = diag(|c1|^2 + |c2|^2, |c3|^2 + |c4|^2)
      rho_right = diag(|c1|^2 + |c3|^2, |c2|^2 + |c4|^2)
    """
    a = _amps(psi, 4, "reduced_density_matrices")
    p = np.abs(a) ** 2
    rho_pool = DensityMatrix(np.diag([p[0], p[1] + p[2], p[3]]).astype(complex))
    rho_left = DensityMatrix(np.diag([p[0] + p[1], p[2] + p[3]]).astype(complex))
    rho_right = DensityMatrix(np.diag([p[0] + p[2], p[1] + p[3]]).astype(complex))
    return rho_pool, rho_left, rho_right


def concurrence_tripartite(psi: PureState) -> float:
    """C = sqrt(3 - sum_i Tr rho_i^2) over the three single-subsystem reductions.

    Ranges up to sqrt(5/3) because one subsystem is a qutrit; the
    value is reported raw, with no rescaling to the qubit ceiling.
    """
    total = 0.0
    for rho in reduced_density_matrices(psi):
        m = rho.matrix
        total += float(np.trace(m @ m).real)
    return math.sqrt(max(0.0, 3.0 - total))


def trace_out_pool(psi: PureState) -> DensityMatrix:
    """Two-dot mixed state, basis {|00>, |01>, |10>, |11>}.

    Diagonal (|c1|^2 .. |c4|^2); the only coherences are c2 c3* and its
    conjugate, between |01> and |10>, which share the pool state |n>.
    """
    a = _amps(psi, 4, "trace_out_pool")
    p = np.abs(a) ** 2
    m = np.diag(p).astype(complex)
    m[1, 2] = a[1] * np.conj(a[2])
    m[2, 1] = a[2] * np.conj(a[1])
    return DensityMatrix(m)


def trace_out_qubit(psi: PureState) -> DensityMatrix:
    """Pool-dot state after tracing out the left dot, embedded in 6 dims.

    Basis {|n+1>, |n>, |n-1>} x {|0>, |1>} with
    index = 2*pool_level + dot_occupancy.  Populated entries: c1 at
    |n+1,0>, c2 at |n,1>, c3 at |n,0>, c4 at |n-1,1>; coherences c1 c2*
    and c3 c4* from the two left-dot sectors.  The unpopulated states
    |n+1,1> and |n-1,0> stay as zero rows/columns; they matter because
    the partial transpose mixes them with the populated sector.
    """
    a = _amps(psi, 4, "trace_out_qubit")
    p = np.abs(a) ** 2
    m = np.zeros((6, 6), dtype=complex)
    m[0, 0] = p[0]
    m[3, 3] = p[1]
    m[2, 2] = p[2]
    m[5, 5] = p[3]
    m[0, 3] = a[0] * np.conj(a[1])
    m[3, 0] = a[1] * np.conj(a[0])
    m[2, 5] = a[2] * np.conj(a[3])
    m[5, 2] = a[3] * np.conj(a[2])
    return DensityMatrix(m)


_SIGMA_Y_PAIR = np.kron(
    np.array([[0.0, -1.0j], [1.0j, 0.0]]), np.array([[0.0, -1.0j], [1.0j, 0.0]])
)


def wootters_lambdas(rho: DensityMatrix) -> np.ndarray:
    """Descending square roots l_i of the eigenvalues of rho rho~.

    rho~ = (sy x sy) rho* (sy x sy) is the spin-flipped state.  rho rho~
    is similar to M M+ with M = sqrt(rho) (sy x sy) sqrt(rho)*, so the
    l_i are the singular values of M.  Computing them that way instead
    of via eigenvalues of the non-Hermitian product keeps near-zero l_i
    accurate to machine precision; the square-root route loses half the
    digits exactly where the concurrence difference needs them.
    """
    if rho.dim != 4:
        raise ValueError(f"two-qubit state must be 4-dim, got {rho.dim}")
    p, v = np.linalg.eigh(rho.matrix)
    root = (v * np.sqrt(np.clip(p, 0.0, None))) @ v.conj().T
    m = root @ _SIGMA_Y_PAIR @ root.conj()
    return np.linalg.svd(m, compute_uv=False)


def concurrence_mixed_two_qubit(rho: DensityMatrix) -> float:
    """Wootters concurrence max{0, l1 - l2 - l3 - l4} of a two-qubit state.

    l_i come from wootters_lambdas.  For states of the trace_out_pool
    form this reduces to max{0, 2|c2||c3| - 2|c1||c4|}.
    """
    roots = wootters_lambdas(rho)
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def eof_from_concurrence(c: float) -> float:
    """Binary-entropy map E_f = f((1 + sqrt(1 - C^2))/2), with 0 log 0 = 0."""
    if c < -_TOL or c > 1.0 + _TOL:
        raise ValueError(f"concurrence must lie in [0, 1], got {c}")
    c = min(max(float(c), 0.0), 1.0)
    x = 0.5 * (1.0 + math.sqrt(1.0 - c * c))
    return _binary_entropy(x)


def _binary_entropy(x: float) -> float:
    out = 0.0
    if 0.0 < x < 1.0:
        out = -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)
    return out


def negativity(rho: DensityMatrix, split: TensorSplit) -> float:
    """Absolute sum of negative partial-transpose eigenvalues.

    The transpose acts on the second subsystem of the split; the value
    equals (trace norm of the partial transpose - 1)/2.
    """
    if rho.dim != split.total_dim:
        raise ValueError(
            f"density matrix dim {rho.dim} does not match split total {split.total_dim}"
        )
    return negative_eigenvalue_sum(partial_transpose(rho, split, len(split.dims) - 1))


def eof_qubit_qutrit(psi: PureState) -> float:
    """Entanglement of formation of the pool-dot reduction.

    Superselection forbids superposing the two left-dot sectors, so the
    mixed state has a unique convex expansion into two pure states with
    weights alpha = |c1|^2 + |c2|^2 and beta = |c3|^2 + |c4|^2 and
    concurrences C_alpha = 2|c1 c2|/alpha, C_beta = 2|c3 c4|/beta:
    E = alpha E(C_alpha) + beta E(C_beta).  Sectors below 1e-14 weight
    contribute zero.
    """
    a = _amps(psi, 4, "eof_qubit_qutrit")
    p = np.abs(a) ** 2
    alpha = float(p[0] + p[1])
    beta = float(p[2] + p[3])
    out = 0.0
    if alpha >= 1e-14:
        c_alpha = 2.0 * abs(a[0]) * abs(a[1]) / alpha
        out += alpha * eof_from_concurrence(min(c_alpha, 1.0))
    if beta >= 1e-14:
        c_beta = 2.0 * abs(a[2]) * abs(a[3]) / beta
        out += beta * eof_from_concurrence(min(c_beta, 1.0))
    return out


# ---------------------------------------------------------------------------
# vectorized kernels over (samples, dim) amplitude arrays


def _series_probabilities(amplitudes: np.ndarray) -> np.ndarray:
    return np.abs(amplitudes) ** 2


def _series_concurrence(amplitudes: np.ndarray) -> np.ndarray:
    return 2.0 * np.abs(amplitudes[:, 0]) * np.abs(amplitudes[:, 1])


def _series_concurrence_tripartite(amplitudes: np.ndarray) -> np.ndarray:
    p = _series_probabilities(amplitudes)
    purity = (
        p[:, 0] ** 2
        + (p[:, 1] + p[:, 2]) ** 2
        + p[:, 3] ** 2
        + (p[:, 0] + p[:, 1]) ** 2
        + (p[:, 2] + p[:, 3]) ** 2
        + (p[:, 0] + p[:, 2]) ** 2
        + (p[:, 1] + p[:, 3]) ** 2
    )
    return np.sqrt(np.clip(3.0 - purity, 0.0, None))


def _series_wootters(amplitudes: np.ndarray) -> np.ndarray:
    p = _series_probabilities(amplitudes)
    return np.clip(2.0 * np.sqrt(p[:, 1] * p[:, 2]) - 2.0 * np.sqrt(p[:, 0] * p[:, 3]), 0.0, None)


def _series_entropy(x: np.ndarray) -> np.ndarray:
    inner = np.clip(x, 1e-300, 1.0)
    outer = np.clip(1.0 - x, 1e-300, 1.0)
    return -inner * np.log2(inner) - outer * np.log2(outer)


def _series_eof_from_concurrence(c: np.ndarray) -> np.ndarray:
    x = 0.5 * (1.0 + np.sqrt(np.clip(1.0 - c * c, 0.0, None)))
    return np.where(c > 0.0, _series_entropy(x), 0.0)


def _series_eof_two_qubit(amplitudes: np.ndarray) -> np.ndarray:
    return _series_eof_from_concurrence(_series_wootters(amplitudes))


def _series_negativity_two_qubit(amplitudes: np.ndarray) -> np.ndarray:
    p = _series_probabilities(amplitudes)
    # single possibly-negative eigenvalue of the partial transpose
    low = 0.5 * (p[:, 0] + p[:, 3] - np.sqrt((p[:, 0] - p[:, 3]) ** 2 + 4.0 * p[:, 1] * p[:, 2]))
    return np.clip(-low, 0.0, None)


def _series_eof_qubit_qutrit(amplitudes: np.ndarray) -> np.ndarray:
    p = _series_probabilities(amplitudes)
    alpha = p[:, 0] + p[:, 1]
    beta = p[:, 2] + p[:, 3]
    c_alpha = 2.0 * np.sqrt(p[:, 0] * p[:, 1]) / np.where(alpha >= 1e-14, alpha, 1.0)
    c_beta = 2.0 * np.sqrt(p[:, 2] * p[:, 3]) / np.where(beta >= 1e-14, beta, 1.0)
    out = np.where(alpha >= 1e-14, alpha * _series_eof_from_concurrence(np.clip(c_alpha, 0.0, 1.0)), 0.0)
    out = out + np.where(beta >= 1e-14, beta * _series_eof_from_concurrence(np.clip(c_beta, 0.0, 1.0)), 0.0)
    return out


def _series_negativity_qubit_qutrit(amplitudes: np.ndarray) -> np.ndarray:
    p = _series_probabilities(amplitudes)
    low1 = 0.5 * (p[:, 1] - np.sqrt(p[:, 1] ** 2 + 4.0 * p[:, 2] * p[:, 3]))
    low2 = 0.5 * (p[:, 2] - np.sqrt(p[:, 2] ** 2 + 4.0 * p[:, 0] * p[:, 1]))
    return np.clip(-low1, 0.0, None) + np.clip(-low2, 0.0, None)


_SERIES_KERNELS = {
    "concurrence": (2, _series_concurrence),
    "concurrence_tripartite": (4, _series_concurrence_tripartite),
    "eof_two_qubit": (4, _series_eof_two_qubit),
    "negativity_two_qubit": (4, _series_negativity_two_qubit),
    "eof_qubit_qutrit": (4, _series_eof_qubit_qutrit),
    "negativity_qubit_qutrit": (4, _series_negativity_qubit_qutrit),
}


def measure_series(series: TrajectorySeries, measure: str) -> np.ndarray:
    """Measure values at every sample of a trajectory.

    measure is one of MEASURES.  The kernels work on amplitude moduli
    only, which is exact here: every reduced state carries its
    coherences as products of amplitudes whose phases drop out.
    """
    if measure not in _SERIES_KERNELS:
        raise ValueError(f"unknown measure {measure!r}; choose from {MEASURES}")
    dim, kernel = _SERIES_KERNELS[measure]
    if series.dim != dim:
        raise ValueError(f"measure {measure!r} needs dim {dim}, series has dim {series.dim}")
    return kernel(series.amplitudes)
