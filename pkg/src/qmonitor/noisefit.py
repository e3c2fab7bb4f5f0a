"""Depolarizing-noise strength estimation and hardware timing arithmetic.

The noise model has a single parameter gamma, the per-cycle probability of
replacing the state by the completely mixed one. Fitting happens on
tau-averaged probability traces: averaging over the evolution period washes
out coherent detail and leaves the exponential envelope (1-gamma)^n, from
which gamma is recovered by deterministic 1-D least squares.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .traces import ProbabilityTrace

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class UnidentifiableDataError(ValueError):
    """The fit objective carries no information about gamma."""


@dataclass(frozen=True)
class TauAveragedTrace:
    """Trace averaged over the evolution period: values[n, k] = mean_tau P[n, k]."""

    values: np.ndarray
    tau_grid: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        row_err = np.max(np.abs(v.sum(axis=1) - 1.0))
        if row_err > 1e-10:
            raise ValueError(f"averaged rows must sum to 1 (max error {row_err:.3e})")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "tau_grid", np.asarray(self.tau_grid, dtype=float))


@dataclass(frozen=True)
class NoiseFit:
    """Fitted depolarizing strength with its residual and derived timescale."""

    gamma: float
    residual_sum_sq: float
    n_noise: float
    fitted_on: tuple[int, int]


@dataclass(frozen=True)
class HardwareProfile:
    """Gate/readout durations (ns), error rates, and per-qubit coherence times (us)."""

    dur_1q_ns: float
    dur_cnot_ns: float
    dur_readout_ns: float
    err_1q: float
    err_cnot: float
    err_readout: float
    t1_us: Mapping[str, float]
    t2_us: Mapping[str, float]

    def __post_init__(self):
        for name in ("dur_1q_ns", "dur_cnot_ns", "dur_readout_ns"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


# Bundled default: characterization snapshot of a 7-qubit fixed-frequency
# transmon device with native CNOTs.
DEFAULT_HARDWARE = HardwareProfile(
    dur_1q_ns=35.0,
    dur_cnot_ns=327.0,
    dur_readout_ns=704.0,
    err_1q=1.7e-4,
    err_cnot=6.8e-3,
    err_readout=0.01,
    t1_us={"q1": 76.4, "q2": 167.1, "q6": 110.7},
    t2_us={"q1": 98.0, "q2": 130.0, "q6": 145.1},
)


@dataclass(frozen=True)
class LayerCount:
    """Non-parallelizable gate layers making up one protocol cycle."""

    n_1q_layers: int
    n_cnot_layers: int
    n_meas_layers: int = 1

    def __post_init__(self):
        if min(self.n_1q_layers, self.n_cnot_layers) < 0:
            raise ValueError("layer counts must be non-negative")
        if self.n_meas_layers < 1:
            raise ValueError("each cycle needs at least one measurement layer")


def tau_average(traces: Mapping[float, ProbabilityTrace]) -> TauAveragedTrace:
    """Trapezoidal tau-average of per-tau traces over a grid covering [0, pi].

    The quadrature is normalized by pi, i.e. it approximates
    (1/pi) * integral_0^pi P[n, k](tau) dtau on the supplied grid.
    """
    if not traces:
        raise ValueError("empty tau grid")
    taus = np.array(sorted(traces.keys()), dtype=float)
    if len(taus) < 2:
        raise ValueError("need at least two tau points")
    if abs(taus[0]) > 1e-9 or abs(taus[-1] - math.pi) > 1e-9:
        raise ValueError("tau grid must cover [0, pi]")
    stack = np.stack([traces[t].values for t in taus])  # (n_tau, n_max+1, N)
    if any(traces[t].values.shape != stack[0].shape for t in taus):
        raise ValueError("traces have inconsistent shapes")
    dt = np.diff(taus)
    weights = np.zeros(len(taus))
    weights[:-1] += dt / 2.0
    weights[1:] += dt / 2.0
    avg = np.tensordot(weights, stack, axes=(0, 0)) / math.pi
    return TauAveragedTrace(values=avg, tau_grid=taus)


def _predict(model: np.ndarray, ns: np.ndarray, gamma: float, dim: int) -> np.ndarray:
    survival = (1.0 - gamma) ** ns
    return survival[:, None] * model + ((1.0 - survival) / dim)[:, None]


def fit_gamma(
    measured: TauAveragedTrace,
    model_noiseless: TauAveragedTrace,
    dim: int,
    n_range: tuple[int, int],
) -> NoiseFit:
    """Least-squares estimate of the depolarizing strength on [0, 1].

    Minimizes sum over n in n_range (inclusive) and all k of
    (measured - [(1-gamma)^n model + (1-(1-gamma)^n)/dim])^2 with a
    golden-section search to width 1e-9 plus one parabolic refinement;
    the objective is smooth and unimodal for data of this form.
    """
    lo, hi = int(n_range[0]), int(n_range[1])
    if lo > hi:
        raise ValueError("empty n_range")
    if lo < 0 or hi > measured.values.shape[0] - 1:
        raise ValueError("n_range outside the trace")
    if measured.values.shape != model_noiseless.values.shape:
        raise ValueError("measured and model shapes differ")

    ns = np.arange(lo, hi + 1, dtype=float)
    data = measured.values[lo : hi + 1]
    model = model_noiseless.values[lo : hi + 1]

    informative = ns >= 1
    if not np.any(informative) or (
        float(np.max(np.abs(model[informative] - 1.0 / dim))) < 1e-12
    ):
        raise UnidentifiableDataError(
            "model trace is uniform on the fit range; gamma has no effect"
        )

    def objective(g: float) -> float:
        return float(np.sum((data - _predict(model, ns, g, dim)) ** 2))

    a, b = 0.0, 1.0
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > 1e-9:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = objective(d)
    gamma = (a + b) / 2.0

    # one parabolic refinement around the bracket midpoint
    h = max(1e-7, (b - a))
    g0, g1, g2 = max(0.0, gamma - h), gamma, min(1.0, gamma + h)
    f0, f1, f2 = objective(g0), objective(g1), objective(g2)
    denom = (g0 - g1) * (f0 - f2) - (g0 - g2) * (f0 - f1)
    if abs(denom) > 0.0:
        num = (g0 - g1) ** 2 * (f0 - f2) - (g0 - g2) ** 2 * (f0 - f1)
        cand = g0 - 0.5 * num / denom
        if 0.0 <= cand <= 1.0 and objective(cand) <= f1:
            gamma = cand

    gamma = min(1.0, max(0.0, gamma))
    residual = objective(gamma)
    if gamma <= 0.0:
        n_noise = math.inf
    elif gamma >= 1.0:
        n_noise = 0.0
    else:
        n_noise = noise_timescale(gamma)
    return NoiseFit(gamma=gamma, residual_sum_sq=residual, n_noise=n_noise, fitted_on=(lo, hi))


def noise_timescale(gamma: float) -> float:
    """Cycles until depolarization dominates: 1 / |ln(1 - gamma)|.

    The proportionality constant is fixed to 1; with it, gamma = 0.12 gives
    about 8 cycles and gamma = 0.033 about 30.
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError("noise_timescale needs 0 < gamma < 1")
    return 1.0 / abs(math.log1p(-gamma))


def cycle_duration(layers: LayerCount, hw: HardwareProfile = DEFAULT_HARDWARE) -> float:
    """Wall-clock duration of one protocol cycle in microseconds.

    Linear in the layer counts: each layer contributes its gate duration,
    plus one readout length per measurement layer.
    """
    ns = (
        layers.n_1q_layers * hw.dur_1q_ns
        + layers.n_cnot_layers * hw.dur_cnot_ns
        + layers.n_meas_layers * hw.dur_readout_ns
    )
    return ns / 1000.0


def decay_rate(gamma: float, dt_us: float) -> float:
    """Depolarization rate gamma / dt in MHz for a cycle duration dt in us."""
    if dt_us <= 0:
        raise ValueError("cycle duration must be positive")
    return float(gamma) / float(dt_us)


def hardware_profile_from_file(path) -> HardwareProfile:
    """Load a HardwareProfile from a JSON file mirroring the dataclass fields."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"hardware profile {path}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ValueError(f"hardware profile {path}: expected a JSON object")
    try:
        return HardwareProfile(
            dur_1q_ns=float(raw["dur_1q_ns"]),
            dur_cnot_ns=float(raw["dur_cnot_ns"]),
            dur_readout_ns=float(raw["dur_readout_ns"]),
            err_1q=float(raw.get("err_1q", 0.0)),
            err_cnot=float(raw.get("err_cnot", 0.0)),
            err_readout=float(raw.get("err_readout", 0.0)),
            t1_us=dict(raw.get("t1_us", {})),
            t2_us=dict(raw.get("t2_us", {})),
        )
    except KeyError as exc:
        raise ValueError(f"hardware profile {path}: missing key {exc}") from exc
