"""Seeded Monte Carlo sampling of single measurement trajectories.

Randomness comes from numpy's counter-based Philox generator. Every
trajectory owns the substream Philox(key = seed * 2^64 + shot), a pure
function of the 64-bit run seed and the shot index, so results are exactly
reproducible and shots can be distributed across workers without any
sequence coupling.

Per trajectory the draw order is fixed: one uniform for the cycle-0 outcome
(drawn by run_shots), then per cycle a depolarizing coin followed by the
outcome uniform. The vectorized path in run_shots consumes the identical
stream, so aggregating sample_trajectory by hand reproduces run_shots bit
for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import evolve, linalg, markov
from .model import Model
from .traces import ProbabilityTrace

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ShotConfig:
    """Sampling run parameters."""

    n_shots: int
    seed: int
    n_max: int
    tau: float
    gamma: float = 0.0

    def __post_init__(self):
        if self.n_shots < 1:
            raise ValueError("n_shots must be >= 1")
        if self.n_max < 0:
            raise ValueError("n_max must be >= 0")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")


@dataclass(frozen=True)
class TrajectoryRecord:
    """Measurement outcomes of one trajectory, one basis index per cycle."""

    outcomes: np.ndarray


@dataclass(frozen=True)
class EmpiricalTrace:
    """Shot-aggregated outcome statistics.

    counts[n, k] is the number of shots that produced outcome k at cycle n;
    row 0 tallies an independent measurement of the bare initial state.
    probabilities = counts / n_shots and stderr is the per-cell binomial
    standard error sqrt(p (1-p) / n_shots).
    """

    counts: np.ndarray
    n_shots: int
    probabilities: np.ndarray
    stderr: np.ndarray

    def trace(self) -> ProbabilityTrace:
        return ProbabilityTrace(values=self.probabilities)


def trajectory_rng(seed: int, shot: int) -> np.random.Generator:
    """The dedicated Philox substream of one (seed, shot index) pair."""
    key = ((int(seed) & _MASK64) << 64) | (int(shot) & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))


def _substream_uniforms(seed: int, n_shots: int, n_draws: int) -> np.ndarray:
    """Leading uniforms of every shot's substream, as an (n_shots, n_draws) block.

    Row i is bitwise identical to trajectory_rng(seed, i).random(n_draws);
    re-keying a single Philox through its state is just much cheaper than
    constructing one bit generator per shot.
    """
    seed_word = int(seed) & _MASK64
    bg = np.random.Philox(key=0)
    template = bg.state
    gen = np.random.Generator(bg)
    zeros = np.zeros(4, dtype=np.uint64)
    out = np.empty((n_shots, n_draws), dtype=float)
    for i in range(n_shots):
        state = dict(template)
        state["state"] = {
            "counter": zeros,
            "key": np.array([i & _MASK64, seed_word], dtype=np.uint64),
        }
        state["buffer"] = zeros
        state["buffer_pos"] = 4
        state["has_uint32"] = 0
        state["uinteger"] = 0
        bg.state = state
        out[i] = gen.random(n_draws)
    return out


def _kernel_tables(m: Model, tau: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cumulative distributions: initial Born, first cycle, and kernel rows."""
    p0 = evolve.born_probabilities(m.initial_state, m.basis)
    u_meas = markov.propagator_in_measurement_basis(m, tau)
    psi_meas = linalg.adjoint(m.basis.v) @ m.initial_state
    first = np.abs(u_meas @ psi_meas) ** 2
    l = markov.build_transition_matrix(m, tau).l
    return np.cumsum(p0), np.cumsum(first), np.cumsum(l, axis=1)


def _pick(cum: np.ndarray, u: float) -> int:
    """Inverse-CDF draw: number of cumulative weights <= u, clipped."""
    idx = int(np.searchsorted(cum, u, side="right"))
    return min(idx, len(cum) - 1)


def sample_trajectory(m: Model, cfg: ShotConfig, rng: np.random.Generator) -> TrajectoryRecord:
    """Draw one trajectory of cfg.n_max outcomes.

    Cycle 1 uses the exact Born distribution of the evolved initial state;
    later cycles jump by the Markov kernel row of the previous outcome. With
    probability gamma per cycle the outcome is replaced by a uniformly random
    basis index, which reproduces the depolarizing channel at the level of
    outcome statistics (the depolarized branch is measured immediately in the
    same basis).
    """
    dim = m.dim
    _, cum_first, cum_rows = _kernel_tables(m, cfg.tau)
    draws = rng.random(2 * cfg.n_max)
    outcomes = np.empty(cfg.n_max, dtype=np.int64)
    prev = -1
    for j in range(cfg.n_max):
        u_noise = draws[2 * j]
        u_out = draws[2 * j + 1]
        if u_noise < cfg.gamma:
            k = min(int(u_out * dim), dim - 1)
        elif prev < 0:
            k = _pick(cum_first, u_out)
        else:
            k = _pick(cum_rows[prev], u_out)
        outcomes[j] = k
        prev = k
    return TrajectoryRecord(outcomes=outcomes)


def run_shots(m: Model, cfg: ShotConfig) -> EmpiricalTrace:
    """Aggregate cfg.n_shots independent trajectories into an EmpiricalTrace.

    Deterministic given cfg.seed: shot i consumes exactly the substream
    trajectory_rng(seed, i), with one extra leading uniform for the cycle-0
    measurement of the initial state.
    """
    dim = m.dim
    n_max = cfg.n_max
    cum_p0, cum_first, cum_rows = _kernel_tables(m, cfg.tau)

    n_draws = 1 + 2 * n_max
    uniforms = _substream_uniforms(cfg.seed, cfg.n_shots, n_draws)

    counts = np.zeros((n_max + 1, dim), dtype=np.int64)
    k0 = np.minimum(
        np.searchsorted(cum_p0, uniforms[:, 0], side="right"), dim - 1
    ).astype(np.int64)
    counts[0] = np.bincount(k0, minlength=dim)

    cur = np.full(cfg.n_shots, -1, dtype=np.int64)
    for j in range(n_max):
        u_noise = uniforms[:, 1 + 2 * j]
        u_out = uniforms[:, 2 + 2 * j]
        if j == 0:
            nxt = np.minimum(
                np.searchsorted(cum_first, u_out, side="right"), dim - 1
            ).astype(np.int64)
        else:
            rows = cum_rows[cur]
            nxt = np.minimum((u_out[:, None] >= rows).sum(axis=1), dim - 1).astype(np.int64)
        if cfg.gamma > 0.0:
            noisy = u_noise < cfg.gamma
            nxt = np.where(noisy, np.minimum((u_out * dim).astype(np.int64), dim - 1), nxt)
        cur = nxt
        counts[j + 1] = np.bincount(cur, minlength=dim)

    probs = counts / float(cfg.n_shots)
    stderr = np.sqrt(probs * (1.0 - probs) / cfg.n_shots)
    return EmpiricalTrace(counts=counts, n_shots=cfg.n_shots, probabilities=probs, stderr=stderr)


def empirical_magnetization(t: EmpiricalTrace) -> np.ndarray:
    """Per-cycle population imbalance P[:, 0] - P[:, 1] of a two-state trace."""
    if t.probabilities.shape[1] != 2:
        raise ValueError("magnetization is defined for two-state systems only")
    return t.probabilities[:, 0] - t.probabilities[:, 1]
