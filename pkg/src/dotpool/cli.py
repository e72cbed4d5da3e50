"""Command-line front end: config handling, orchestration, data emission.

Subcommands evolve, sweep, and spectrum write plot-ready CSV (or JSON)
plus an optional JSON sidecar with the config snapshot, tool version,
and summary observables.  Data files are byte-identical across repeated
runs with the same config: no timestamps, floats serialized with 17
significant digits, metadata confined to the sidecar.

Exit codes: 0 success, 2 config error, 3 runtime error.  Errors are a
single machine-parsable line on stderr: ``error: <category>: <detail>``.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys

import numpy as np

from . import __version__
from .analysis import (
    PeriodNotFoundError,
    SweepConfig,
    _detect,
    _refined_max,
    horizon_policy,
    scaling_product,
    spectrum_report,
    sweep,
)
from .dynamics import PureState, default_dt, max_dt, sample_trajectory
from .entanglement import MEASURES, measure_series
from .model import SystemParams, build_bipartite_hamiltonian, build_tripartite_hamiltonian

__all__ = ["RunConfig", "ConfigError", "main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


# measure -> (required system, required trace_out)
_MEASURE_CONTEXT = {
    "concurrence": ("bipartite", "none"),
    "concurrence_tripartite": ("tripartite", "none"),
    "eof_two_qubit": ("tripartite", "pool"),
    "negativity_two_qubit": ("tripartite", "pool"),
    "eof_qubit_qutrit": ("tripartite", "qubit"),
    "negativity_qubit_qutrit": ("tripartite", "qubit"),
}

_DEFAULT_MEASURES = {
    ("bipartite", "none"): ("concurrence",),
    ("tripartite", "none"): ("concurrence_tripartite",),
    ("tripartite", "pool"): ("eof_two_qubit", "negativity_two_qubit"),
    ("tripartite", "qubit"): ("eof_qubit_qutrit", "negativity_qubit_qutrit"),
}


@dataclasses.dataclass
class RunConfig:
    """Fully resolved run configuration; JSON keys equal field names."""

    command: str
    system: str = "tripartite"
    n: int = 10
    u_over_t: float = 0.2
    e_over_t: float = 0.01
    t_coupling: float = 1.0
    t_max: float | None = None
    dt: float | None = None
    measures: tuple[str, ...] = ()
    trace_out: str = "none"
    zero_tol: float = 0.01
    window: str = "period"
    n_list: tuple[int, ...] = ()
    u_min: float | None = None
    u_max: float | None = None
    u_steps: int | None = None
    u_list: tuple[float, ...] = ()
    threads: int = 1
    out: str | None = None
    format: str = "csv"
    seed_metadata: bool = True


def _parse_int_list(text: str) -> tuple[int, ...]:
    items = [part for part in text.split(",") if part.strip()]
    return tuple(int(part) for part in items)


def _parse_float_list(text: str) -> tuple[float, ...]:
    items = [part for part in text.split(",") if part.strip()]
    return tuple(float(part) for part in items)


def _parse_measures(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


class _Parser(argparse.ArgumentParser):
    # keep argparse's own complaints on one machine-parsable line
    def error(self, message):
        self.exit(EXIT_CONFIG, f"error: config: {message}\n")


def build_parser() -> _Parser:
    parser = _Parser(prog="dotpool", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command")

    def add_common(p):
        p.add_argument("--config", help="JSON config file; explicit flags override it")
        p.add_argument("--out", help="output data file (default: stdout, no sidecar)")
        p.add_argument("--format", choices=["csv", "json"], help="data format (default csv)")
        p.add_argument("--seed-metadata", choices=["on", "off"],
                       help="write the JSON sidecar next to --out (default on)")
        p.add_argument("--threads", type=int, help="parallel sweep workers (default 1)")
        p.add_argument("--dump-config", action="store_true",
                       help="print the resolved config as JSON and exit")
        p.add_argument("--system", choices=["bipartite", "tripartite"])
        p.add_argument("--n", type=int, help="reference pool occupation")
        p.add_argument("--u", type=float, dest="u_over_t", help="interaction ratio U/T")
        p.add_argument("--e", type=float, dest="e_over_t", help="trap energy ratio E/T")
        p.add_argument("--t-coupling", type=float, help="absolute coupling T (default 1)")

    evolve = sub.add_parser("evolve", help="sample one trajectory and its measures")
    add_common(evolve)
    evolve.add_argument("--t-max", type=float, help="horizon in 1/T units (default: policy)")
    evolve.add_argument("--dt", type=float, help="sampling step (default: pi/(40 Omega_max))")
    evolve.add_argument("--measures", type=_parse_measures,
                        help="comma-separated measure names (default by system/trace-out)")
    evolve.add_argument("--trace-out", choices=["none", "pool", "qubit"])
    evolve.add_argument("--zero-tol", type=float, help="zero-instant threshold (default 0.01)")

    swp = sub.add_parser("sweep", help="tabulate t_ent and maxima over a (n, U/T) grid")
    add_common(swp)
    swp.add_argument("--t-max", type=float)
    swp.add_argument("--dt", type=float)
    swp.add_argument("--trace-out", choices=["none", "pool", "qubit"])
    swp.add_argument("--zero-tol", type=float)
    swp.add_argument("--window", choices=["period", "horizon"],
                     help="maxima over [0, t_ent] or over the whole horizon")
    swp.add_argument("--n-list", type=_parse_int_list, help="comma-separated n values")
    swp.add_argument("--u-min", type=float)
    swp.add_argument("--u-max", type=float)
    swp.add_argument("--u-steps", type=int, help="number of grid points, endpoints included")
    swp.add_argument("--u-list", type=_parse_float_list, help="explicit U/T grid")

    spect = sub.add_parser("spectrum", help="report block eigenvalues and the singlet")
    add_common(spect)

    return parser


_LIST_FIELDS = {"measures": tuple, "n_list": tuple, "u_list": tuple}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, config file, and explicit flags (flags win)."""
    merged = {field.name: field.default for field in dataclasses.fields(RunConfig)
              if field.default is not dataclasses.MISSING}
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}")
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        known = {field.name for field in dataclasses.fields(RunConfig)}
        for key, value in loaded.items():
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            if key == "command":
                continue
            merged[key] = tuple(value) if isinstance(value, list) else value
    for key, value in vars(args).items():
        if key in ("config", "dump_config") or value is None:
            continue
        if key == "seed_metadata":
            value = value == "on"
        merged[key] = value
    merged["command"] = args.command
    config = RunConfig(**merged)
    _validate(config)
    return config


def _validate(config: RunConfig) -> None:
    if config.command not in ("evolve", "sweep", "spectrum"):
        raise ConfigError(f"unknown command {config.command!r}")
    if config.system not in ("bipartite", "tripartite"):
        raise ConfigError(f"system must be bipartite or tripartite, got {config.system!r}")
    if config.trace_out not in ("none", "pool", "qubit"):
        raise ConfigError(f"trace_out must be none, pool or qubit, got {config.trace_out!r}")
    if config.trace_out != "none" and config.system != "tripartite":
        raise ConfigError("trace_out requires --system tripartite")
    if config.n < 1:
        raise ConfigError(f"n must be >= 1, got {config.n}")
    if config.u_over_t < 0:
        raise ConfigError(f"u must be nonnegative, got {config.u_over_t}")
    if config.t_coupling <= 0:
        raise ConfigError(f"t-coupling must be positive, got {config.t_coupling}")
    if config.t_max is not None and not config.t_max > 0:
        raise ConfigError(f"t-max must be positive, got {config.t_max}")
    if config.dt is not None and not config.dt > 0:
        raise ConfigError(f"dt must be positive, got {config.dt}")
    if not config.zero_tol > 0:
        raise ConfigError(f"zero-tol must be positive, got {config.zero_tol}")
    if config.threads < 1:
        raise ConfigError(f"threads must be >= 1, got {config.threads}")
    if config.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {config.format!r}")
    if config.window not in ("period", "horizon"):
        raise ConfigError(f"window must be period or horizon, got {config.window!r}")

    if config.command == "evolve":
        measures = config.measures or _DEFAULT_MEASURES[(config.system, config.trace_out)]
        for name in measures:
            if name not in _MEASURE_CONTEXT:
                raise ConfigError(f"unknown measure {name!r}; choose from {', '.join(MEASURES)}")
            need_system, need_trace = _MEASURE_CONTEXT[name]
            if config.system != need_system or config.trace_out != need_trace:
                raise ConfigError(
                    f"measure {name!r} requires --system {need_system} --trace-out {need_trace}"
                )
        config.measures = tuple(measures)

    if config.command == "sweep":
        if not config.n_list:
            raise ConfigError("sweep needs a nonempty --n-list")
        if any(n < 1 for n in config.n_list):
            raise ConfigError("all n values must be >= 1")
        have_range = any(v is not None for v in (config.u_min, config.u_max, config.u_steps))
        if config.u_list and have_range:
            raise ConfigError("give either --u-list or --u-min/--u-max/--u-steps, not both")
        if not config.u_list:
            if None in (config.u_min, config.u_max, config.u_steps):
                raise ConfigError("sweep needs --u-list or all of --u-min/--u-max/--u-steps")
            if config.u_steps < 1:
                raise ConfigError(f"u-steps must be >= 1, got {config.u_steps}")
            if config.u_min < 0 or config.u_max < config.u_min:
                raise ConfigError("need 0 <= u-min <= u-max")
        elif any(u < 0 for u in config.u_list):
            raise ConfigError("all U/T values must be nonnegative")


def _u_grid(config: RunConfig) -> list[float]:
    if config.u_list:
        return [float(u) for u in config.u_list]
    if config.u_steps == 1:
        return [float(config.u_min)]
    return [float(u) for u in np.linspace(config.u_min, config.u_max, config.u_steps)]


def _fmt(value) -> str:
    if value is None:
        return ""
    return "%.17g" % value


def _write_output(config: RunConfig, data: str, sidecar: dict | None) -> None:
    if config.out is None:
        sys.stdout.write(data)
        return
    with open(config.out, "w", newline="") as fh:
        fh.write(data)
    if sidecar is not None and config.seed_metadata:
        with open(config.out + ".meta.json", "w") as fh:
            json.dump(sidecar, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _config_snapshot(config: RunConfig) -> dict:
    snapshot = dataclasses.asdict(config)
    for key, kind in _LIST_FIELDS.items():
        snapshot[key] = list(snapshot[key])
    return snapshot


def _build_hamiltonian(config: RunConfig):
    params = SystemParams.from_ratios(
        config.n, config.u_over_t, config.e_over_t, config.t_coupling
    )
    if config.system == "bipartite":
        return build_bipartite_hamiltonian(params)
    return build_tripartite_hamiltonian(params)


def cmd_evolve(config: RunConfig) -> int:
    h = _build_hamiltonian(config)
    dt = config.dt if config.dt is not None else default_dt(h)
    bound = max_dt(h)
    if dt > bound * (1 + 1e-12):
        raise ConfigError(
            f"dt={dt:g} violates the resolution guard dt <= pi/(20*Omega_max) = {bound:.6g}"
        )
    t_max = config.t_max if config.t_max is not None else horizon_policy(h)
    series = sample_trajectory(h, PureState.basis_state(h.dim, 0), t_max, dt)
    values = {name: measure_series(series, name) for name in config.measures}

    columns = ["t"]
    for k in range(h.dim):
        columns += [f"re_c{k + 1}", f"im_c{k + 1}"]
    columns += list(config.measures)

    if config.format == "csv":
        buffer = io.StringIO()
        buffer.write("# trajectory samples; time in 1/T units, measures dimensionless\n")
        buffer.write("# columns: " + ", ".join(columns) + "\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        amps = series.amplitudes
        measure_cols = [values[name] for name in config.measures]
        for i, t in enumerate(series.times):
            row = [_fmt(t)]
            for k in range(h.dim):
                row += [_fmt(amps[i, k].real), _fmt(amps[i, k].imag)]
            row += [_fmt(col[i]) for col in measure_cols]
            writer.writerow(row)
        data = buffer.getvalue()
    else:
        rows = []
        for i, t in enumerate(series.times):
            row = [float(t)]
            for k in range(h.dim):
                row += [float(series.amplitudes[i, k].real), float(series.amplitudes[i, k].imag)]
            row += [float(values[name][i]) for name in config.measures]
            rows.append(row)
        data = json.dumps({"columns": columns, "rows": rows}, sort_keys=True) + "\n"

    summary = {"t_ent": None, "measures": {}}
    for name in config.measures:
        entry = {"max": _refined_max(series.times, values[name], None), "t_ent": None}
        status, t_ent, _events, observed = _detect(series.times, values[name], config.zero_tol)
        if status == "ok":
            entry["t_ent"] = t_ent
            entry["status"] = "ok"
        elif status == "degenerate":
            entry["t_ent"] = t_ent
            entry["status"] = "degenerate"
        else:
            entry["status"] = f"period not found (observed minimum {observed:.6g})"
        summary["measures"][name] = entry
    first = config.measures[0]
    summary["t_ent"] = summary["measures"][first]["t_ent"]
    sidecar = {"version": __version__, "config": _config_snapshot(config), "summary": summary}
    _write_output(config, data, sidecar)
    return EXIT_OK


def cmd_sweep(config: RunConfig) -> int:
    grid = _u_grid(config)
    base = SystemParams.from_ratios(
        config.n_list[0], 0.0, config.e_over_t, config.t_coupling
    )
    sweep_config = SweepConfig(
        system=config.system,
        trace_out=config.trace_out,
        window=config.window,
        t_max=config.t_max,
        dt=config.dt,
        zero_tol=config.zero_tol,
        workers=config.threads,
    )
    if config.dt is not None:
        # the guard must hold at every grid point, not just the first
        for n in config.n_list:
            for u in grid:
                params = SystemParams.from_ratios(n, u, config.e_over_t, config.t_coupling)
                if config.system == "bipartite":
                    point_h = build_bipartite_hamiltonian(params)
                else:
                    point_h = build_tripartite_hamiltonian(params)
                bound = max_dt(point_h)
                if config.dt > bound * (1 + 1e-12):
                    raise ConfigError(
                        f"dt={config.dt:g} violates the resolution guard at n={n}, "
                        f"u={u:g}: need dt <= {bound:.6g}"
                    )
    result = sweep(base, grid, list(config.n_list), sweep_config)

    columns = ["n", "u_over_t", "t_ent", "c_max", "e_max", "n_max", "t_ent_times_u", "status"]
    if config.format == "csv":
        buffer = io.StringIO()
        buffer.write("# sweep over (n, U/T); times in 1/T units, measures dimensionless\n")
        buffer.write("# columns: " + ", ".join(columns) + "\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for p in result.points:
            writer.writerow([
                str(p.n), _fmt(p.u_over_t), _fmt(p.t_ent), _fmt(p.c_max),
                _fmt(p.e_max), _fmt(p.n_max), _fmt(p.t_ent_times_u), p.status,
            ])
        data = buffer.getvalue()
    else:
        rows = [dataclasses.asdict(p) for p in result.points]
        data = json.dumps({"columns": columns, "rows": rows}, sort_keys=True) + "\n"

    scaling = scaling_product(result)
    failed = [p for p in result.points if p.status != "ok"]
    sidecar = {
        "version": __version__,
        "config": _config_snapshot(config),
        "summary": {
            "points_ok": len(result.points) - len(failed),
            "points_failed": len(failed),
            "scaling_max_rel_deviation": {str(n): dev for n, dev in scaling.max_rel_deviation.items()},
        },
    }
    _write_output(config, data, sidecar)
    if failed:
        sys.stderr.write(
            f"error: runtime: {len(failed)} of {len(result.points)} grid points failed\n"
        )
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_spectrum(config: RunConfig) -> int:
    h = _build_hamiltonian(config)
    report = spectrum_report(h)
    if config.format == "csv":
        buffer = io.StringIO()
        buffer.write("# block eigenvalues in T units; offset is the dropped identity part\n")
        buffer.write(f"# offset: {_fmt(report.offset)}\n")
        buffer.write(f"# singlet_gap: {_fmt(report.singlet_gap)}\n")
        buffer.write(f"# spread: {_fmt(report.spread)}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["index", "eigenvalue", "is_singlet"])
        for k, lam in enumerate(report.eigenvalues):
            writer.writerow([str(k), _fmt(lam), "1" if k == report.singlet_index else "0"])
        data = buffer.getvalue()
    else:
        data = json.dumps(dataclasses.asdict(report), sort_keys=True) + "\n"
    sidecar = {"version": __version__, "config": _config_snapshot(config)}
    _write_output(config, data, sidecar)
    return EXIT_OK


_COMMANDS = {"evolve": cmd_evolve, "sweep": cmd_sweep, "spectrum": cmd_spectrum}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        sys.stderr.write("error: config: missing subcommand (evolve, sweep, spectrum)\n")
        return EXIT_CONFIG
    try:
        config = resolve_config(args)
    except ConfigError as exc:
        sys.stderr.write("error: config: " + str(exc).replace("\n", " ") + "\n")
        return EXIT_CONFIG
    if args.dump_config:
        sys.stdout.write(json.dumps(_config_snapshot(config), indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    try:
        return _COMMANDS[config.command](config)
    except ConfigError as exc:
        sys.stderr.write("error: config: " + str(exc).replace("\n", " ") + "\n")
        return EXIT_CONFIG
    except PeriodNotFoundError as exc:
        sys.stderr.write("error: runtime: " + str(exc).replace("\n", " ") + "\n")
        return EXIT_RUNTIME
    except Exception as exc:
        sys.stderr.write("error: runtime: " + str(exc).replace("\n", " ") + "\n")
        return EXIT_RUNTIME
