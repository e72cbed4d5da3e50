"""Derived observables: entanglement periods, maxima, sweeps, scaling, spectra.

The period detector reads "two subsequent instances of zero
entanglement" off a sampled trajectory.  It has to survive two hostile
regimes at once: kink-shaped zeros much narrower than the sampling step
(the bipartite |sin|-like concurrence) and slow revival valleys whose
floor is visited by many fast dips (the two-dot measures at small U/T).
The recipe, in order:

  1. collect discrete local minima, plus t=0 when the series starts
     descending;
  2. score each dip by the depth of a piecewise-linear model through
     its neighbors, v[k] - |v[k-1] - v[k+1]|/2, which is exact for a
     kink zero at any sample phase and errs low for smooth minima;
  3. classify a dip as a zero instant when that depth < zero_tol;
  4. refine each zero time by a parabola through the three squared
     samples around the minimum (the square of a generic zero crossing
     is locally parabolic, the measure itself is not);
  5. collapse bursts of zero instants closer than a quarter of the
     largest separation into their deepest member, so that a valley of
     repeated dips counts as one instance of zero;
  6. t_ent = spacing of the first two surviving instants with t > dt.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .dynamics import PureState, TrajectorySeries, default_dt, sample_trajectory
from .entanglement import measure_series
from .linalg import eigendecompose_hermitian
from .model import (
    SystemParams,
    build_bipartite_hamiltonian,
    build_tripartite_hamiltonian,
)

__all__ = [
    "DEFAULT_ZERO_TOL",
    "PeriodEstimate",
    "PeriodNotFoundError",
    "SweepConfig",
    "SweepPoint",
    "SweepResult",
    "ScalingResult",
    "SpectrumReport",
    "detect_entanglement_period",
    "max_over_period",
    "sweep",
    "scaling_product",
    "spectrum_report",
    "horizon_policy",
    "golden_section_max",
    "locate_u_c",
]

DEFAULT_ZERO_TOL = 0.01

# zero instants closer than this fraction of the largest separation are
# one instance of zero visited several times
_CLUSTER_FRACTION = 0.25

_SINGLET = np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2.0)


class PeriodNotFoundError(RuntimeError):
    """Fewer than two zero instants in the sampled horizon."""

    def __init__(self, message: str, observed_minimum: float):
        super().__init__(message)
        self.observed_minimum = observed_minimum


@dataclasses.dataclass(frozen=True)
class PeriodEstimate:
    """Entanglement period and the refined zero instants behind it."""

    t_ent: float
    zero_instants: tuple[float, ...]
    method_tolerance: float
    degenerate: bool = False

    def __post_init__(self) -> None:
        if not self.t_ent > 0.0:
            raise ValueError(f"t_ent must be positive, got {self.t_ent}")
        instants = tuple(float(t) for t in self.zero_instants)
        if any(b <= a for a, b in zip(instants, instants[1:])):
            raise ValueError("zero_instants must be strictly increasing")
        if len(instants) >= 2 and not self.degenerate:
            spacing = instants[1] - instants[0]
            if abs(self.t_ent - spacing) > 1e-9 * max(1.0, instants[1]):
                raise ValueError("t_ent must equal the spacing of the first two instants")
        object.__setattr__(self, "zero_instants", instants)


def _detect(times: np.ndarray, values: np.ndarray, zero_tol: float):
    """Core detector; returns (status, t_ent, events, observed_minimum)."""
    dt = float(times[1] - times[0])
    v = np.asarray(values, dtype=float)
    n = v.size
    if bool((v < zero_tol).all()):
        return "degenerate", dt, [float(t) for t in times], None

    interior = np.flatnonzero((v[1:-1] < v[:-2]) & (v[1:-1] <= v[2:])) + 1
    if v[0] <= v[1]:
        candidates = np.concatenate([[0], interior])
    else:
        candidates = interior
    if candidates.size == 0:
        return "not found", None, [], float(v.min())

    depth = v[candidates].astype(float).copy()
    inner = (candidates > 0) & (candidates < n - 1)
    ki = candidates[inner]
    depth[inner] = v[ki] - 0.5 * np.abs(v[ki - 1] - v[ki + 1])

    refined = times[candidates].astype(float).copy()
    y = v * v
    y0, y1, y2 = y[ki - 1], y[ki], y[ki + 1]
    den = y0 - 2.0 * y1 + y2
    shift = np.where(den > 0.0, 0.5 * (y0 - y2) / np.where(den > 0.0, den, 1.0), 0.0)
    refined[inner] = times[ki] + np.clip(shift, -1.0, 1.0) * dt

    keep = depth < zero_tol
    event_times = refined[keep]
    event_raw = v[candidates][keep]
    if event_times.size == 0:
        return "not found", None, [], float(v.min())

    order = np.argsort(event_times, kind="stable")
    event_times = event_times[order]
    event_raw = event_raw[order]
    if event_times.size > 1:
        separations = np.diff(event_times)
        threshold = _CLUSTER_FRACTION * float(separations.max())
        boundaries = np.flatnonzero(separations > threshold) + 1
        groups = np.split(np.arange(event_times.size), boundaries)
    else:
        groups = [np.arange(1)]
    events = [float(event_times[g[int(np.argmin(event_raw[g]))]]) for g in groups]
    events = [t for t in events if t > dt]
    if len(events) < 2:
        return "not found", None, events, float(v.min())
    return "ok", float(events[1] - events[0]), events, None


def detect_entanglement_period(
    series: TrajectorySeries, measure: str, zero_tol: float = DEFAULT_ZERO_TOL
) -> PeriodEstimate:
    """Entanglement period of the selected measure along a trajectory.

    A dip counts as a zero instant when its interpolated depth falls
    below zero_tol; clustered instants collapse to one; t_ent is the
    spacing of the first two refined instants with t > dt.  A series
    below zero_tol everywhere degenerates to t_ent = dt with a warning;
    fewer than two instants raise PeriodNotFoundError carrying the
    observed minimum.
    """
    if not zero_tol > 0.0:
        raise ValueError(f"zero_tol must be positive, got {zero_tol}")
    values = measure_series(series, measure)
    status, t_ent, events, observed = _detect(series.times, values, zero_tol)
    if status == "degenerate":
        warnings.warn(
            f"measure {measure!r} stays below zero_tol={zero_tol:g} over the whole "
            "series; reporting the degenerate period t_ent = dt",
            RuntimeWarning,
            stacklevel=2,
        )
        return PeriodEstimate(t_ent, tuple(events), zero_tol, degenerate=True)
    if status == "not found":
        raise PeriodNotFoundError(
            f"period not found: fewer than two zero instants of {measure!r} below "
            f"zero_tol={zero_tol:g} in the horizon (observed minimum {observed:.6g})",
            observed_minimum=observed,
        )
    return PeriodEstimate(t_ent, tuple(events), zero_tol)


def _refined_max(times: np.ndarray, values: np.ndarray, t_end: float | None) -> float:
    """Maximum over [0, t_end] with parabolic refinement at the argmax."""
    if t_end is None:
        cut = values.size
    else:
        cut = int(np.searchsorted(times, t_end * (1.0 + 1e-12), side="right"))
    if cut < 1:
        raise ValueError("empty window")
    window = values[:cut]
    j = int(np.argmax(window))
    best = float(window[j])
    if 0 < j < values.size - 1:
        y0, y1, y2 = float(values[j - 1]), best, float(values[j + 1])
        den = y0 - 2.0 * y1 + y2
        if den < 0.0:
            shift = 0.5 * (y0 - y2) / den
            if abs(shift) <= 1.0:
                best = y1 - 0.125 * (y0 - y2) ** 2 / den
    return best


def max_over_period(series: TrajectorySeries, measure: str, period: PeriodEstimate) -> float:
    """Maximum of the measure over one entanglement period [0, t_ent]."""
    values = measure_series(series, measure)
    return _refined_max(series.times, values, period.t_ent)


def horizon_policy(h, cap: float = 2e4) -> float:
    """Per-point horizon t_max = max(50, 4 pi / Omega_min), capped.

    Omega_min is the smallest nonzero eigenvalue gap, so the window
    covers two beats of the slowest beating in the spectrum.  The cap
    bounds memory for near-degenerate spectra; points that genuinely
    need more time surface as period-not-found rows instead.
    """
    lam = np.linalg.eigvalsh(np.asarray(getattr(h, "matrix", h), dtype=complex))
    gaps = np.diff(lam)
    scale = max(1.0, float(np.abs(lam).max()))
    real = gaps[gaps > 1e-9 * scale]
    if real.size == 0:
        return 50.0
    return float(min(cap, max(50.0, 4.0 * math.pi / float(real.min()))))


_TRACE_OUT_MEASURES = {
    "none": (),
    "pool": ("eof_two_qubit", "negativity_two_qubit"),
    "qubit": ("eof_qubit_qutrit", "negativity_qubit_qutrit"),
}


@dataclasses.dataclass(frozen=True)
class SweepConfig:
    """How each grid point of a sweep is evaluated.

    window "period" takes maxima over [0, t_ent] and requires the
    period; window "horizon" takes maxima over the whole sampled window
    and records a missing period as a null column instead of a failure
    (require_period overrides either default).  t_max None applies
    horizon_policy per point; dt None applies the default resolution.
    """

    system: str = "tripartite"
    trace_out: str = "none"
    window: str = "period"
    t_max: float | None = None
    dt: float | None = None
    zero_tol: float = DEFAULT_ZERO_TOL
    require_period: bool | None = None
    workers: int = 1
    horizon_cap: float = 2e4

    def __post_init__(self) -> None:
        if self.system not in ("bipartite", "tripartite"):
            raise ValueError(f"system must be bipartite or tripartite, got {self.system!r}")
        if self.trace_out not in _TRACE_OUT_MEASURES:
            raise ValueError(f"trace_out must be none, pool or qubit, got {self.trace_out!r}")
        if self.trace_out != "none" and self.system != "tripartite":
            raise ValueError("trace_out requires the tripartite system")
        if self.window not in ("period", "horizon"):
            raise ValueError(f"window must be period or horizon, got {self.window!r}")
        if self.t_max is not None and not self.t_max > 0.0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.dt is not None and not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.zero_tol > 0.0:
            raise ValueError(f"zero_tol must be positive, got {self.zero_tol}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if not self.horizon_cap > 0.0:
            raise ValueError(f"horizon_cap must be positive, got {self.horizon_cap}")

    @property
    def period_required(self) -> bool:
        if self.require_period is not None:
            return self.require_period
        return self.window == "period"


@dataclasses.dataclass(frozen=True)
class SweepPoint:
    """One (n, U/T) row of a sweep."""

    n: int
    u_over_t: float
    t_ent: float | None
    c_max: float | None
    e_max: float | None
    n_max: float | None
    t_ent_times_u: float | None
    status: str = "ok"


@dataclasses.dataclass(frozen=True)
class SweepResult:
    """Sweep rows ordered by (n, U/T) plus the provenance snapshot."""

    points: tuple[SweepPoint, ...]
    provenance: dict


def _evaluate_point(base: SystemParams, n: int, u_over_t: float, config: SweepConfig) -> SweepPoint:
    try:
        params = dataclasses.replace(base, n=n, u=u_over_t * base.t)
        if config.system == "bipartite":
            h = build_bipartite_hamiltonian(params)
            period_measure = "concurrence"
        else:
            h = build_tripartite_hamiltonian(params)
            period_measure = "concurrence_tripartite"
        t_max = config.t_max if config.t_max is not None else horizon_policy(h, config.horizon_cap)
        dt = config.dt if config.dt is not None else default_dt(h)
        psi0 = PureState.basis_state(h.dim, 0)
        series = sample_trajectory(h, psi0, t_max, dt)
        concurrence = measure_series(series, period_measure)

        status = "ok"
        t_ent = None
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            detection = _detect(series.times, concurrence, config.zero_tol)
        if detection[0] == "ok" or detection[0] == "degenerate":
            t_ent = detection[1]
        elif config.period_required:
            status = f"period not found (observed minimum {detection[3]:.6g})"

        window_end: float | None
        if config.window == "period":
            window_end = t_ent
        else:
            window_end = None
        maxima_possible = config.window == "horizon" or t_ent is not None

        c_max = e_max = n_max = None
        if maxima_possible:
            c_max = _refined_max(series.times, concurrence, window_end)
            extras = _TRACE_OUT_MEASURES[config.trace_out]
            if extras:
                e_max = _refined_max(series.times, measure_series(series, extras[0]), window_end)
                n_max = _refined_max(series.times, measure_series(series, extras[1]), window_end)
        product = t_ent * u_over_t if t_ent is not None else None
        return SweepPoint(
            n=int(n),
            u_over_t=float(u_over_t),
            t_ent=t_ent,
            c_max=c_max,
            e_max=e_max,
            n_max=n_max,
            t_ent_times_u=product,
            status=status,
        )
    except Exception as exc:
        return SweepPoint(
            n=int(n),
            u_over_t=float(u_over_t),
            t_ent=None,
            c_max=None,
            e_max=None,
            n_max=None,
            t_ent_times_u=None,
            status=f"error: {exc}",
        )


def sweep(base: SystemParams, u_grid, n_list, config: SweepConfig) -> SweepResult:
    """Evaluate t_ent and measure maxima on the (n, U/T) grid.

    Every grid point starts from the first basis state (both dots
    empty), runs its own trajectory, and extracts the period and the
    configured maxima.  Failures are recorded in the point's status and
    never abort the sweep.  Points are evaluated by config.workers
    threads and assembled in (n, U/T) order, so the result does not
    depend on completion order.
    """
    u_values = [float(u) for u in u_grid]
    n_values = [int(n) for n in n_list]
    if not u_values or not n_values:
        raise ValueError("u_grid and n_list must be nonempty")
    grid = [(n, u) for n in n_values for u in u_values]
    if len(set(grid)) != len(grid):
        raise ValueError("grid points must be unique")

    if config.workers == 1:
        points = [_evaluate_point(base, n, u, config) for n, u in grid]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            points = list(pool.map(lambda nu: _evaluate_point(base, nu[0], nu[1], config), grid))
    ordered = sorted(points, key=lambda p: (p.n, p.u_over_t))
    provenance = {
        "base": dataclasses.asdict(base),
        "u_grid": u_values,
        "n_list": n_values,
        "config": dataclasses.asdict(config),
    }
    return SweepResult(points=tuple(ordered), provenance=provenance)


@dataclasses.dataclass(frozen=True)
class ScalingResult:
    """Per-point products t_ent * U/T and their spread around the mean."""

    products: tuple[tuple[int, float, float], ...]
    max_rel_deviation: dict
    skipped: tuple[tuple[int, float, str], ...]


def scaling_product(result: SweepResult) -> ScalingResult:
    """t_ent * U/T per point and the max relative deviation from the mean per n.

    Points without a period are skipped with a note.  A 1/U period law
    makes the product constant in U, so the deviation is the figure of
    merit for the scaling check.
    """
    products = []
    skipped = []
    for point in result.points:
        if point.t_ent is None:
            skipped.append((point.n, point.u_over_t, f"missing t_ent ({point.status})"))
            continue
        products.append((point.n, point.u_over_t, point.t_ent * point.u_over_t))
    deviations = {}
    for n in sorted({entry[0] for entry in products}):
        group = np.array([entry[2] for entry in products if entry[0] == n])
        mean = float(group.mean())
        deviations[n] = float(np.abs(group - mean).max() / mean) if mean > 0 else 0.0
    return ScalingResult(
        products=tuple(products),
        max_rel_deviation=deviations,
        skipped=tuple(skipped),
    )


@dataclasses.dataclass(frozen=True)
class SpectrumReport:
    """Sorted block eigenvalues and the singlet bookkeeping of the 4x4 block."""

    eigenvalues: tuple[float, ...]
    offset: float
    singlet_index: int | None
    singlet_eigenvalue: float | None
    singlet_gap: float | None
    spread: float | None


def spectrum_report(h) -> SpectrumReport:
    """Eigenvalues plus singlet identification for the two-dot block.

    For a 4-dim block: the eigenvalue within 1e-12 * max(1, |H|) of
    zero whose eigenvector has the largest overlap with the dot-sector
    singlet (0, 1, -1, 0)/sqrt(2) is flagged; singlet_gap is the
    distance to the third excited state and spread the ground-to-third
    distance.  A 2-dim block reports eigenvalues only.
    """
    decomp = eigendecompose_hermitian(h)
    lam = decomp.eigenvalues
    offset = float(getattr(h, "offset", 0.0))
    if lam.size != 4:
        return SpectrumReport(
            eigenvalues=tuple(float(x) for x in lam),
            offset=offset,
            singlet_index=None,
            singlet_eigenvalue=None,
            singlet_gap=None,
            spread=None,
        )
    matrix = np.asarray(getattr(h, "matrix", h), dtype=complex)
    tol = 1e-12 * max(1.0, float(np.linalg.norm(matrix)))
    near_zero = np.flatnonzero(np.abs(lam) <= tol)
    singlet_index = None
    singlet_eigenvalue = None
    if near_zero.size:
        overlaps = np.abs(decomp.eigenvectors[:, near_zero].conj().T @ _SINGLET)
        singlet_index = int(near_zero[int(np.argmax(overlaps))])
        singlet_eigenvalue = float(lam[singlet_index])
    return SpectrumReport(
        eigenvalues=tuple(float(x) for x in lam),
        offset=offset,
        singlet_index=singlet_index,
        singlet_eigenvalue=singlet_eigenvalue,
        singlet_gap=(float(lam[3] - lam[singlet_index]) if singlet_index is not None else None),
        spread=float(lam[3] - lam[0]),
    )


def golden_section_max(fn, a: float, b: float, tol: float = 1e-3) -> tuple[float, float]:
    """Golden-section search for the maximum of a unimodal fn on [a, b].

    Returns (argmax, best evaluated value); the argmax is the bracket
    midpoint once the bracket is narrower than tol.
    """
    if not b > a:
        raise ValueError(f"need b > a, got [{a}, {b}]")
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1 = fn(x1)
    f2 = fn(x2)
    while (b - a) > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = fn(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = fn(x1)
    return 0.5 * (a + b), max(f1, f2)


def locate_u_c(
    base: SystemParams,
    n: int,
    u_grid,
    config: SweepConfig,
    coarse_e_max=None,
    tol: float = 1e-3,
) -> tuple[float, float]:
    """Peak position U_c of E_max(U/T) for one n, refined to tol in U/T.

    The coarse grid supplies a bracket around its interior argmax
    (precomputed column values can be passed to skip re-evaluation);
    golden-section search then refines the peak.  A maximum sitting on
    the grid edge raises, because no interior peak is exhibited.
    """
    u_values = sorted(float(u) for u in u_grid)
    if len(u_values) < 3:
        raise ValueError("u_grid needs at least 3 points to bracket a peak")
    if config.trace_out == "none":
        raise ValueError("config.trace_out must select a reduction with an e_max column")

    def evaluate(u: float) -> float:
        point = _evaluate_point(base, n, u, config)
        if point.e_max is None:
            raise RuntimeError(f"e_max unavailable at u={u:g}: {point.status}")
        return point.e_max

    if coarse_e_max is None:
        coarse = [evaluate(u) for u in u_values]
    else:
        coarse = [float(v) for v in coarse_e_max]
        if len(coarse) != len(u_values):
            raise ValueError("coarse_e_max length must match u_grid")
    peak = int(np.argmax(coarse))
    if peak == 0 or peak == len(u_values) - 1:
        raise ValueError(
            f"no interior maximum: grid argmax sits at the edge u={u_values[peak]:g}"
        )
    return golden_section_max(evaluate, u_values[peak - 1], u_values[peak + 1], tol=tol)
