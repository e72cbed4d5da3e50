"""Entanglement dynamics of atomic quantum dots coupled to a small boson pool.

Particle-number conservation collapses the problem onto tiny Fock
blocks: a 2x2 block for one dot exchanging bosons with the pool and a
4x4 block for two dots.  The package diagonalizes these blocks exactly,
propagates pure states spectrally, evaluates the entanglement measures
of the dot/pool partitions, and extracts derived observables such as
the entanglement period, per-period maxima, and parameter-sweep tables.
"""

from .model import (
    SystemParams,
    HermitianMatrix,
    build_bipartite_hamiltonian,
    build_tripartite_hamiltonian,
    rabi_parameters,
)
from .linalg import (
    EigenDecomposition,
    TensorSplit,
    eigendecompose_hermitian,
    partial_transpose,
    negative_eigenvalue_sum,
)
from .dynamics import (
    PureState,
    TrajectorySeries,
    evolve,
    sample_trajectory,
    default_dt,
    max_dt,
    spectral_radius,
)
from .entanglement import (
    DensityMatrix,
    MeasureRecord,
    MEASURES,
    concurrence_pure_bipartite,
    concurrence_tripartite,
    concurrence_mixed_two_qubit,
    wootters_lambdas,
    eof_from_concurrence,
    eof_qubit_qutrit,
    measure_series,
    negativity,
    reduced_density_matrices,
    trace_out_pool,
    trace_out_qubit,
)
from .analysis import (
    PeriodEstimate,
    PeriodNotFoundError,
    SweepConfig,
    SweepPoint,
    SweepResult,
    ScalingResult,
    SpectrumReport,
    detect_entanglement_period,
    max_over_period,
    sweep,
    scaling_product,
    spectrum_report,
    horizon_policy,
    golden_section_max,
    locate_u_c,
)

__version__ = "0.1.0"
