"""Exact unitary propagation of pure states by spectral decomposition.

The Hamiltonian is diagonalized once and every sample time is evaluated
directly as psi(t) = sum_k exp(-i lambda_k t) <v_k|psi0> v_k, so there
is no step-to-step error accumulation and horizons of 1e4/T and beyond
stay exact to rounding.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .linalg import EigenDecomposition, eigendecompose_hermitian

__all__ = [
    "PureState",
    "TrajectorySeries",
    "evolve",
    "sample_trajectory",
    "spectral_radius",
    "max_dt",
    "default_dt",
]

_NORM_TOL = 1e-12


@dataclasses.dataclass(frozen=True)
class PureState:
    """Normalized complex amplitudes over a conserved-number basis (dim 2 or 4)."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amp = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amp.size not in (2, 4):
            raise ValueError(f"state dimension must be 2 or 4, got {amp.size}")
        norm_sq = float(np.sum(np.abs(amp) ** 2))
        if abs(norm_sq - 1.0) > _NORM_TOL:
            raise ValueError(
                f"state must be normalized: |norm^2 - 1| = {abs(norm_sq - 1.0):.3e}"
            )
        amp.flags.writeable = False
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def basis_state(cls, dim: int, index: int = 0) -> "PureState":
        """Basis vector |index> of the given dimension."""
        amp = np.zeros(dim, dtype=complex)
        amp[index] = 1.0
        return cls(amp)


@dataclasses.dataclass(frozen=True)
class TrajectorySeries:
    """Uniformly sampled pure-state trajectory.

    times[k] = k*dt up to rounding; amplitudes[k] is psi(times[k]).
    Spacing uniformity is checked relative to the horizon because the
    products k*dt themselves carry rounding of that size.
    """

    times: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        times = np.array(self.times, dtype=float)
        amps = np.array(self.amplitudes, dtype=complex)
        if times.ndim != 1 or times.size < 2:
            raise ValueError("times must be a 1-d array with at least 2 samples")
        if amps.ndim != 2 or amps.shape[0] != times.size:
            raise ValueError("amplitudes must have shape (len(times), dim)")
        steps = np.diff(times)
        if steps.min() <= 0.0:
            raise ValueError("times must be strictly increasing")
        dt = float(times[1] - times[0])
        slack = 1e-12 * max(1.0, float(times[-1]))
        if np.abs(steps - dt).max() > slack:
            raise ValueError("times must be uniformly spaced")
        times.flags.writeable = False
        amps.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[1]


def spectral_radius(h) -> float:
    """Largest absolute eigenvalue of the block (offset not included)."""
    m = np.asarray(getattr(h, "matrix", h), dtype=complex)
    return float(np.max(np.abs(np.linalg.eigvalsh(m))))


def max_dt(h) -> float:
    """Resolution guard: sampling steps must not exceed pi/(20 Omega_max)."""
    radius = spectral_radius(h)
    return math.pi / (20.0 * radius) if radius > 0.0 else math.inf


def default_dt(h) -> float:
    """Default sampling step pi/(40 Omega_max): 40 samples per fastest half-period."""
    radius = spectral_radius(h)
    return math.pi / (40.0 * radius) if radius > 0.0 else 1.0


def _propagate(decomp: EigenDecomposition, psi0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Amplitudes at the given times, one row per time."""
    weights = decomp.eigenvectors.conj().T @ psi0
    phases = np.exp(-1j * np.outer(times, decomp.eigenvalues)) * weights
    return phases @ decomp.eigenvectors.T


def evolve(h, psi0: PureState, t: float) -> PureState:
    """psi(t) = sum_k exp(-i lambda_k t) <v_k|psi0> v_k."""
    decomp = eigendecompose_hermitian(h)
    if decomp.eigenvalues.size != psi0.dim:
        raise ValueError(
            f"dimension mismatch: H is {decomp.eigenvalues.size}-dim, state is {psi0.dim}-dim"
        )
    out = _propagate(decomp, psi0.amplitudes, np.array([float(t)]))[0]
    return PureState(out)


def sample_trajectory(h, psi0: PureState, t_max: float, dt: float | None = None) -> TrajectorySeries:
    """Sample psi on the grid t = 0, dt, 2dt, ... up to t_max.

    Each sample equals evolve(h, psi0, t): one diagonalization serves
    the whole grid.  dt defaults to pi/(40 Omega_max) and must respect
    the guard dt <= pi/(20 Omega_max), where Omega_max is the spectral
    radius of h.
    """
    if dt is None:
        dt = default_dt(h)
    dt = float(dt)
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_max < dt:
        raise ValueError(f"t_max must be at least dt, got t_max={t_max} < dt={dt}")
    bound = max_dt(h)
    if dt > bound * (1.0 + 1e-12):
        raise ValueError(
            f"dt={dt:.6g} too coarse for the spectrum: need dt <= pi/(20*Omega_max) = {bound:.6g}"
        )
    decomp = eigendecompose_hermitian(h)
    if decomp.eigenvalues.size != psi0.dim:
        raise ValueError(
            f"dimension mismatch: H is {decomp.eigenvalues.size}-dim, state is {psi0.dim}-dim"
        )
    steps = int(math.floor(float(t_max) / dt + 1e-9))
    times = np.arange(steps + 1, dtype=float) * dt
    amplitudes = _propagate(decomp, psi0.amplitudes, times)
    return TrajectorySeries(times, amplitudes)
