"""Physical parameters and the conserved-number block Hamiltonians.

One or two atomic quantum dots (two-level traps, occupancy 0 or 1)
exchange single bosons with a pool of n interacting bosons.  The total
particle number is conserved, so the dynamics lives in tiny Fock
blocks: with one dot the basis is {|n,0>, |n-1,1>}, with two dots it is
{|n+1,00>, |n,01>, |n,10>, |n-1,11>}.  This module builds the 2x2 and
4x4 Hamiltonian blocks in those bases.

Diagonal parts proportional to the identity are not added into the
matrices; they are kept as a scalar ``offset`` because they only
produce a global phase and cannot affect any entanglement observable.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

__all__ = [
    "SystemParams",
    "HermitianMatrix",
    "build_bipartite_hamiltonian",
    "build_tripartite_hamiltonian",
    "rabi_parameters",
]


@dataclasses.dataclass(frozen=True)
class SystemParams:
    """Energies of the dot-pool system, all in one unit (hbar = 1).

    n      reference pool occupation; the basis needs |n-1>, so n >= 1
    u      boson-boson interaction energy U >= 0
    t      dot-pool coupling T > 0 (sets the Rabi scale)
    e_b    pool single-particle energy
    delta  detuning energy of the dot levels

    Only the sum e = e_b + delta enters the block Hamiltonians; the two
    terms are kept separate because the dropped diagonal offsets weigh
    them differently.
    """

    n: int
    u: float = 0.0
    t: float = 1.0
    e_b: float = 0.0
    delta: float = 0.0

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise ValueError(f"n must be an integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        for name in ("u", "t", "e_b", "delta"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.t <= 0.0:
            raise ValueError(f"t must be positive, got {self.t}")
        if self.u < 0.0:
            raise ValueError(f"u must be nonnegative, got {self.u}")

    @property
    def e(self) -> float:
        """Energy difference between the traps, e_b + delta."""
        return self.e_b + self.delta

    @classmethod
    def from_ratios(
        cls, n: int, u_over_t: float = 0.0, e_over_t: float = 0.0, t: float = 1.0
    ) -> "SystemParams":
        """Build params from the dimensionless ratios U/T and E/T.

        The whole energy difference goes into e_b; delta stays 0.
        """
        return cls(n=n, u=u_over_t * t, t=t, e_b=e_over_t * t, delta=0.0)


@dataclasses.dataclass(frozen=True)
class HermitianMatrix:
    """Dense complex Hermitian operator plus a dropped identity offset.

    ``offset`` records the multiple of the identity that was left out of
    ``matrix``.  It shifts the spectrum but no entanglement observable,
    so it is carried only for optional spectrum reporting.
    """

    matrix: np.ndarray
    offset: float = 0.0

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"matrix must be square, got shape {m.shape}")
        if m.shape[0] < 1 or m.shape[0] > 6:
            raise ValueError(f"dimension must be 1..6, got {m.shape[0]}")
        scale = max(1.0, float(np.linalg.norm(m)))
        defect = float(np.linalg.norm(m - m.conj().T))
        if defect > 1e-12 * scale:
            raise ValueError(
                f"matrix is not Hermitian within 1e-12 (defect {defect:.3e})"
            )
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def build_bipartite_hamiltonian(params: SystemParams) -> HermitianMatrix:
    """2x2 block for one dot, basis {|n,0>, |n-1,1>}.

    Returns [[0, T sqrt(n)], [T sqrt(n), -E - U(n-1)]] with
    E = e_b + delta.  The dropped diagonal part E_b n + U n(n-1)/2 is
    stored in the offset.
    """
    n, u, t = params.n, params.u, params.t
    coupling = t * math.sqrt(n)
    matrix = np.array(
        [
            [0.0, coupling],
            [coupling, -params.e - u * (n - 1)],
        ],
        dtype=complex,
    )
    offset = params.e_b * n + 0.5 * u * n * (n - 1)
    return HermitianMatrix(matrix, offset=offset)


def build_tripartite_hamiltonian(params: SystemParams) -> HermitianMatrix:
    """4x4 block for two dots, basis {|n+1,00>, |n,01>, |n,10>, |n-1,11>}.

    Diagonal (E+Un, 0, 0, -E+U(1-n)), couplings T sqrt(n+1) from the
    both-dots-empty state and T sqrt(n) into the both-dots-full state.
    The dropped diagonal part E_b n + U n(n-1)/2 - delta goes into the
    offset.  The dot-sector singlet (0, 1, -1, 0)/sqrt(2) is annihilated
    exactly: the two couplings cancel term by term.
    """
    n, u, t, e = params.n, params.u, params.t, params.e
    up = t * math.sqrt(n + 1)
    down = t * math.sqrt(n)
    matrix = np.array(
        [
            [e + u * n, up, up, 0.0],
            [up, 0.0, 0.0, down],
            [up, 0.0, 0.0, down],
            [0.0, down, down, -e + u * (1 - n)],
        ],
        dtype=complex,
    )
    offset = params.e_b * n + 0.5 * u * n * (n - 1) - params.delta
    return HermitianMatrix(matrix, offset=offset)


def rabi_parameters(params: SystemParams) -> tuple[float, float]:
    """Rabi frequency and detuning of the bipartite block.

    omega_R = T sqrt(n), delta = -[E + U(n-1)]/2.  The block
    eigenvalues are delta +- sqrt(delta^2 + omega_R^2).
    """
    omega_r = params.t * math.sqrt(params.n)
    detuning = -(params.e + params.u * (params.n - 1)) / 2.0
    return omega_r, detuning
