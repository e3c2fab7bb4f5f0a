"""Command-line front end.

Subcommands: simulate (sweep a tau grid and emit per-tau probability traces
as CSV), analyze (spectrum/regime/stationary report as JSON), fit-noise
(estimate the depolarizing strength from a trace CSV), render (static SVG
plots from a trace CSV), and timing (cycle duration and decay rate from
layer counts).

Runs are reproducible: a fixed config plus seed yields byte-identical CSV
and JSON, and SVG identical up to the version comment. Exit codes: 0 ok,
2 configuration error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__, analytic, evolve, markov, noisefit, render, sample
from . import model as model_mod
from .traces import ProbabilityTrace

ENV_OUT = "QMONITOR_OUT"
ENGINES = ("exact", "markov", "closed_form", "sample")
SCHEMA_VERSION = 1

# analytic closed forms exist only for the built-in models
_ANALYTIC_KIND = {
    "single_qubit": "single_qubit",
    "two_qubit_singlet_triplet": "singlet_triplet",
    "two_qubit_bell": "bell",
}


class ConfigError(Exception):
    """Bad configuration: unknown keys, invalid values, missing files."""


class DataError(Exception):
    """Malformed or unusable input data."""


@dataclass
class RunConfig:
    """Sweep configuration shared by simulate and analyze."""

    model: str = "single_qubit"
    engine: str = "exact"
    tau_start: float = 0.0
    tau_stop: float = math.pi
    tau_count: int = 33
    n_max: int = 32
    gamma: float = 0.0
    shots: int = 8192
    seed: int = 0
    n_fit_range: str = ""
    out: str = "out"

    def validate(self) -> None:
        if self.engine not in ENGINES:
            raise ConfigError(f"unknown engine {self.engine!r}; choose from {ENGINES}")
        if not (0.0 <= self.tau_start <= self.tau_stop <= 2.0 * math.pi + 1e-12):
            raise ConfigError("tau grid must satisfy 0 <= start <= stop <= 2*pi")
        if self.tau_count < 1:
            raise ConfigError("tau_count must be >= 1")
        if self.n_max < 0:
            raise ConfigError("n_max must be >= 0")
        if not (0.0 <= self.gamma <= 1.0):
            raise ConfigError("gamma must lie in [0, 1]")
        if self.shots < 1:
            raise ConfigError("shots must be >= 1")

    def tau_grid(self) -> np.ndarray:
        if self.tau_count == 1:
            return np.array([self.tau_start])
        return np.linspace(self.tau_start, self.tau_stop, self.tau_count)


_CONFIG_TYPES = {
    "model": str,
    "engine": str,
    "tau_start": float,
    "tau_stop": float,
    "tau_count": int,
    "n_max": int,
    "gamma": float,
    "shots": int,
    "seed": int,
    "n_fit_range": str,
    "out": str,
}


def _read_config_file(path: str) -> dict:
    parser = configparser.ConfigParser()
    try:
        loaded = parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"config file {path}: {exc}") from exc
    if not loaded:
        raise ConfigError(f"config file not found: {path}")
    merged: dict = {}
    for section in parser.sections():
        for key, raw in parser[section].items():
            if key not in _CONFIG_TYPES:
                raise ConfigError(f"config file {path}: unknown key {key!r}")
            try:
                merged[key] = _CONFIG_TYPES[key](raw)
            except ValueError as exc:
                raise ConfigError(f"config file {path}: bad value for {key!r}: {raw!r}") from exc
    return merged


def _build_run_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if getattr(args, "config", None):
        values.update(_read_config_file(args.config))
    for key in _CONFIG_TYPES:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if "out" not in values:
        values["out"] = os.environ.get(ENV_OUT, "out")
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def _build_model(name: str) -> model_mod.Model:
    try:
        return model_mod.build_model(name)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot build model {name!r}: {exc}") from exc


def _model_key(name: str) -> str:
    stem = os.path.splitext(os.path.basename(name))[0]
    return "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in stem) or "model"


def _fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _parse_n_range(text: str, n_max: int) -> tuple[int, int]:
    if not text:
        return (min(1, n_max), n_max)
    sep = ":" if ":" in text else ","
    parts = text.split(sep)
    try:
        lo, hi = (int(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"bad n range {text!r}; expected LO:HI") from exc
    if not (0 <= lo <= hi <= n_max):
        raise ConfigError(f"n range {text!r} outside 0..{n_max}")
    return (lo, hi)


def _parse_layers(text: str) -> noisefit.LayerCount:
    try:
        n1q, ncnot, nmeas = (int(p) for p in text.split(","))
        return noisefit.LayerCount(n_1q_layers=n1q, n_cnot_layers=ncnot, n_meas_layers=nmeas)
    except ValueError as exc:
        raise ConfigError(f"bad --layers value {text!r}; expected 1q,cnot,meas") from exc


def _load_hw_profile(path: str | None) -> noisefit.HardwareProfile:
    if path is None:
        return noisefit.DEFAULT_HARDWARE
    try:
        return noisefit.hardware_profile_from_file(path)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot load hardware profile: {exc}") from exc


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _summary(command: str, config_echo: dict, files: list[str], results: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "command": command,
        "config": config_echo,
        "files": files,
        "results": results,
    }


# ---------------------------------------------------------------------------
# trace CSV I/O


def _write_trace_csv(path, labels, taus, traces, stderrs=None) -> None:
    n_states = len(labels)
    header = ["tau", "n", *labels]
    if stderrs is not None:
        header += [f"stderr_{k}" for k in range(n_states)]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for tau in taus:
            values = traces[tau].values
            for n in range(values.shape[0]):
                row = [_fmt_float(tau), str(n)]
                row += [_fmt_float(x) for x in values[n]]
                if stderrs is not None:
                    row += [_fmt_float(x) for x in stderrs[tau][n]]
                writer.writerow(row)


def read_trace_csv(path):
    """Parse a simulate CSV back into (labels, taus, {tau: ProbabilityTrace}).

    stderr columns, when present, are ignored. Raises DataError on any
    structural problem.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise DataError(f"{path}: empty CSV") from None
            if header[:2] != ["tau", "n"]:
                raise DataError(f"{path}: header must start with tau,n")
            labels = []
            for col in header[2:]:
                if col.startswith("stderr_"):
                    break
                labels.append(col)
            if not labels:
                raise DataError(f"{path}: no outcome columns")
            n_states = len(labels)
            per_tau: dict[float, list[list[float]]] = {}
            order: list[float] = []
            for lineno, row in enumerate(reader, start=2):
                if len(row) < 2 + n_states:
                    raise DataError(f"{path}:{lineno}: too few columns")
                try:
                    tau = float(row[0])
                    n = int(row[1])
                    vals = [float(x) for x in row[2 : 2 + n_states]]
                except ValueError as exc:
                    raise DataError(f"{path}:{lineno}: {exc}") from exc
                if tau not in per_tau:
                    per_tau[tau] = []
                    order.append(tau)
                if n != len(per_tau[tau]):
                    raise DataError(f"{path}:{lineno}: n values must be contiguous from 0")
                per_tau[tau].append(vals)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not per_tau:
        raise DataError(f"{path}: no data rows")
    lengths = {len(rows) for rows in per_tau.values()}
    if len(lengths) != 1:
        raise DataError(f"{path}: tau blocks have differing n ranges")
    traces = {}
    for tau, rows in per_tau.items():
        try:
            traces[tau] = ProbabilityTrace(values=np.array(rows))
        except ValueError as exc:
            raise DataError(f"{path}: tau={tau}: {exc}") from exc
    return labels, order, traces


# ---------------------------------------------------------------------------
# engines


def _trace_for(cfg: RunConfig, m: model_mod.Model, tau: float, tau_index: int):
    """One (trace, stderr-or-None) pair for a grid point."""
    if cfg.engine == "exact":
        return evolve.run_exact(m, tau, cfg.n_max, cfg.gamma), None
    if cfg.engine == "markov":
        l = markov.build_transition_matrix(m, tau)
        p0 = evolve.born_probabilities(m.initial_state, m.basis)
        trace = markov.propagate(l, p0, cfg.n_max)
        if cfg.gamma > 0.0:
            trace = evolve.noisy_closed_form(trace, cfg.gamma, m.dim)
        return trace, None
    if cfg.engine == "closed_form":
        kind = _ANALYTIC_KIND.get(cfg.model)
        if kind is None:
            raise ConfigError(
                f"engine closed_form supports {sorted(_ANALYTIC_KIND)}, not {cfg.model!r}"
            )
        trace = analytic.closed_form_trace(kind, tau, cfg.n_max)
        if cfg.gamma > 0.0:
            trace = evolve.noisy_closed_form(trace, cfg.gamma, m.dim)
        return trace, None
    if cfg.engine == "sample":
        shot_cfg = sample.ShotConfig(
            n_shots=cfg.shots,
            seed=cfg.seed + tau_index,
            n_max=cfg.n_max,
            tau=tau,
            gamma=cfg.gamma,
        )
        emp = sample.run_shots(m, shot_cfg)
        return emp.trace(), emp.stderr
    raise ConfigError(f"unknown engine {cfg.engine!r}")


def cmd_simulate(cfg: RunConfig) -> dict:
    m = _build_model(cfg.model)
    taus = cfg.tau_grid()
    traces, stderrs = {}, {}
    for i, tau in enumerate(taus):
        tau = float(tau)
        trace, err = _trace_for(cfg, m, tau, i)
        traces[tau] = trace
        if err is not None:
            stderrs[tau] = err

    os.makedirs(cfg.out, exist_ok=True)
    key = f"{_model_key(cfg.model)}_{cfg.engine}"
    csv_path = os.path.join(cfg.out, f"{key}.csv")
    _write_trace_csv(
        csv_path,
        m.basis.labels,
        [float(t) for t in taus],
        traces,
        stderrs if cfg.engine == "sample" else None,
    )

    results: dict = {"rows": int(len(taus) * (cfg.n_max + 1)), "labels": list(m.basis.labels)}
    if cfg.engine == "sample":
        dev = 0.0
        for tau, trace in traces.items():
            reference = evolve.run_exact(m, tau, cfg.n_max, cfg.gamma)
            dev = max(dev, float(np.max(np.abs(trace.values - reference.values))))
        results["max_abs_dev_from_exact"] = dev
        results["five_sigma_bound"] = 5.0 / math.sqrt(cfg.shots)

    summary = _summary("simulate", asdict(cfg), [csv_path], results)
    summary_path = os.path.join(cfg.out, f"{key}_summary.json")
    summary["files"].append(summary_path)
    _write_json(summary_path, summary)
    print(f"wrote {csv_path}")
    print(f"wrote {summary_path}")
    return summary


def cmd_analyze(cfg: RunConfig) -> dict:
    m = _build_model(cfg.model)
    h_blocks = model_mod.detect_blocks(model_mod.hamiltonian_in_basis(m))
    p0 = evolve.born_probabilities(m.initial_state, m.basis)
    per_tau = []
    for tau in cfg.tau_grid():
        tau = float(tau)
        l = markov.build_transition_matrix(m, tau)
        spec = markov.spectrum(l)
        report = markov.classify(l, h_blocks)
        stationary = markov.stationary_limit(l, p0)
        per_tau.append(
            {
                "tau": tau,
                "eigenvalues": [float(x) for x in spec.eigenvalues],
                "regime": report.kind,
                "multiplicity_of_one": report.multiplicity_of_one,
                "has_minus_one": report.has_minus_one,
                "regime_blocks": report.blocks.as_lists() if report.blocks else None,
                "stationary": None if stationary is None else [float(x) for x in stationary],
                "details": report.details,
            }
        )
    results = {
        "hamiltonian_blocks": h_blocks.as_lists(),
        "initial_distribution": [float(x) for x in p0],
        "per_tau": per_tau,
    }
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, f"analyze_{_model_key(cfg.model)}.json")
    summary = _summary("analyze", asdict(cfg), [path], results)
    _write_json(path, summary)
    print(f"wrote {path}")
    return summary


def cmd_fit_noise(args: argparse.Namespace) -> dict:
    if not args.model:
        raise ConfigError("fit-noise requires --model (the noiseless reference)")
    m = _build_model(args.model)
    labels, taus, traces = read_trace_csv(args.input)
    if len(labels) != m.dim:
        raise DataError(
            f"CSV has {len(labels)} outcome columns but model {args.model!r} has dim {m.dim}"
        )
    n_max = next(iter(traces.values())).n_max
    n_range = _parse_n_range(args.n_fit_range or "", n_max)

    try:
        measured = noisefit.tau_average(traces)
        reference = noisefit.tau_average(
            {tau: evolve.run_exact(m, tau, n_max, 0.0) for tau in taus}
        )
        fit = noisefit.fit_gamma(measured, reference, m.dim, n_range)
    except noisefit.UnidentifiableDataError as exc:
        raise DataError(str(exc)) from exc
    except ValueError as exc:
        raise DataError(str(exc)) from exc

    results = {
        "gamma": fit.gamma,
        "residual_sum_sq": fit.residual_sum_sq,
        "n_noise": fit.n_noise if math.isfinite(fit.n_noise) else None,
        "fitted_on": list(fit.fitted_on),
        "tau_points": len(taus),
    }
    if args.layers:
        layers = _parse_layers(args.layers)
        hw = _load_hw_profile(args.hw_profile)
        dt = noisefit.cycle_duration(layers, hw)
        results["cycle_duration_us"] = dt
        results["decay_rate_mhz"] = noisefit.decay_rate(fit.gamma, dt)

    out_dir = args.out or os.environ.get(ENV_OUT, "out")
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"fit_{_model_key(args.model)}.json")
    summary = _summary("fit-noise", {"input": args.input, "model": args.model}, [path], results)
    _write_json(path, summary)
    print(f"wrote {path}")
    print(f"gamma = {fit.gamma:.6f}")
    return summary


# ---------------------------------------------------------------------------
# rendering


def _column_values(labels, traces, taus, column: str) -> np.ndarray:
    """Grid values[tau_index, n] for a named column or 'magnetization'."""
    n_rows = next(iter(traces.values())).values.shape[0]
    grid = np.empty((len(taus), n_rows))
    if column == "magnetization":
        if len(labels) != 2:
            raise DataError("magnetization rendering needs a two-state trace")
        for i, tau in enumerate(taus):
            grid[i] = render.magnetization_grid(traces[tau].values)
        return grid
    if column in labels:
        k = labels.index(column)
    else:
        try:
            k = int(column)
        except ValueError:
            raise DataError(f"unknown column {column!r}; have {labels}") from None
        if not 0 <= k < len(labels):
            raise DataError(f"column index {k} out of range")
    for i, tau in enumerate(taus):
        grid[i] = traces[tau].values[:, k]
    return grid


def cmd_render(args: argparse.Namespace) -> dict:
    labels, taus, traces = read_trace_csv(args.input)
    n_rows = next(iter(traces.values())).values.shape[0]
    column = args.column or ("magnetization" if len(labels) == 2 else labels[0])

    out_dir = args.out or os.environ.get(ENV_OUT, "out")
    os.makedirs(out_dir, exist_ok=True)
    stem = _model_key(args.input)

    if args.kind == "heatmap":
        grid = _column_values(labels, traces, taus, column)
        svg = render.heatmap_svg(
            ns=list(range(n_rows)),
            taus=taus,
            values=grid,
            title=f"{column} over (n, tau)",
        )
        name = f"{stem}_heatmap_{_model_key(column)}.svg"
    elif args.kind == "lines":
        grid = _column_values(labels, traces, taus, column)
        if args.at_n:
            try:
                picks = [int(p) for p in args.at_n.split(",")]
            except ValueError as exc:
                raise ConfigError(f"bad --at-n value {args.at_n!r}") from exc
            bad = [p for p in picks if not 0 <= p < n_rows]
            if bad:
                raise DataError(f"--at-n values {bad} outside 0..{n_rows - 1}")
        else:
            step = max(1, (n_rows - 1) // 5)
            picks = list(range(1, n_rows, step))[:6] or [0]
        series = {n: grid[:, n] for n in picks}
        svg = render.lines_svg(taus, series, title=f"{column} vs tau", ylabel=column)
        name = f"{stem}_lines_{_model_key(column)}.svg"
    elif args.kind == "rho_grid":
        if not args.model:
            raise ConfigError("rho_grid rendering requires --model")
        m = _build_model(args.model)
        if m.dim != len(labels):
            raise DataError("CSV columns do not match the model dimension")
        if args.n is None or args.tau is None:
            raise ConfigError("rho_grid rendering requires --n and --tau")
        matches = [t for t in taus if abs(t - args.tau) < 1e-9]
        if not matches:
            raise DataError(f"tau={args.tau} not present in the CSV grid")
        if not 0 <= args.n < n_rows:
            raise DataError(f"n={args.n} outside 0..{n_rows - 1}")
        probs = traces[matches[0]].values[args.n]
        rho_meas = np.diag(probs.astype(complex))
        rho_comp = evolve.rho_in_basis(rho_meas, m.basis, "to_computational")
        svg = render.rho_grid_svg(
            rho_comp,
            rho_meas,
            model_mod.computational_basis(m.dim).labels,
            m.basis.labels,
            title=f"|rho| at n={args.n}, tau={args.tau:.4f}",
        )
        name = f"{stem}_rho_grid_n{args.n}.svg"
    else:
        raise ConfigError(f"unknown render kind {args.kind!r}")

    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    print(f"wrote {path}")
    return _summary("render", {"input": args.input, "kind": args.kind}, [path], {})


def cmd_timing(args: argparse.Namespace) -> dict:
    if not args.layers:
        raise ConfigError("timing requires --layers 1q,cnot,meas")
    layers = _parse_layers(args.layers)
    hw = _load_hw_profile(args.hw_profile)
    gamma = args.gamma if args.gamma is not None else 0.0
    if not 0.0 <= gamma <= 1.0:
        raise ConfigError("gamma must lie in [0, 1]")
    dt = noisefit.cycle_duration(layers, hw)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "layers": [layers.n_1q_layers, layers.n_cnot_layers, layers.n_meas_layers],
        "cycle_duration_us": dt,
        "gamma": gamma,
        "decay_rate_mhz": noisefit.decay_rate(gamma, dt),
    }
    print(json.dumps(payload, sort_keys=True))
    return payload


# ---------------------------------------------------------------------------
# argument parsing


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI config file; flags override its values")
    p.add_argument("--model", help="built-in model name or path to a model JSON file")
    p.add_argument("--engine", choices=ENGINES)
    p.add_argument("--tau-start", dest="tau_start", type=float)
    p.add_argument("--tau-stop", dest="tau_stop", type=float)
    p.add_argument("--tau-count", dest="tau_count", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help=f"output directory (default ${ENV_OUT} or ./out)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmonitor",
        description="Simulate and analyze repeatedly measured small quantum systems.",
    )
    parser.add_argument("--version", action="version", version=f"qmonitor {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="sweep a tau grid and write trace CSV")
    _add_run_flags(p_sim)

    p_ana = sub.add_parser("analyze", help="spectrum and regime report as JSON")
    _add_run_flags(p_ana)

    p_fit = sub.add_parser("fit-noise", help="fit the depolarizing strength to a trace CSV")
    p_fit.add_argument("input", help="CSV produced by simulate")
    p_fit.add_argument("--model", required=False)
    p_fit.add_argument("--n-fit-range", dest="n_fit_range", help="LO:HI cycles used in the fit")
    p_fit.add_argument("--layers", help="1q,cnot,meas layer counts for timing output")
    p_fit.add_argument("--hw-profile", dest="hw_profile", help="hardware profile JSON")
    p_fit.add_argument("--out")

    p_ren = sub.add_parser("render", help="render a trace CSV to SVG")
    p_ren.add_argument("input", help="CSV produced by simulate")
    p_ren.add_argument("--kind", choices=("heatmap", "lines", "rho_grid"), default="heatmap")
    p_ren.add_argument("--column", help="outcome label, column index, or 'magnetization'")
    p_ren.add_argument("--at-n", dest="at_n", help="comma-separated n values for lines")
    p_ren.add_argument("--model", help="model (rho_grid only)")
    p_ren.add_argument("--n", type=int, help="cycle count (rho_grid only)")
    p_ren.add_argument("--tau", type=float, help="tau grid point (rho_grid only)")
    p_ren.add_argument("--out")

    p_tim = sub.add_parser("timing", help="cycle duration and decay rate from layer counts")
    p_tim.add_argument("--layers", help="1q,cnot,meas layer counts")
    p_tim.add_argument("--gamma", type=float)
    p_tim.add_argument("--hw-profile", dest="hw_profile", help="hardware profile JSON")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            cmd_simulate(_build_run_config(args))
        elif args.command == "analyze":
            cmd_analyze(_build_run_config(args))
        elif args.command == "fit-noise":
            cmd_fit_noise(args)
        elif args.command == "render":
            cmd_render(args)
        elif args.command == "timing":
            cmd_timing(args)
        else:  # pragma: no cover - argparse enforces the choices
            raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
