"""Closed-form outcome probabilities for the built-in models.

These are exact trigonometric expressions in (n, tau) and serve as
independent oracles for the density-matrix and Markov engines. The n = 0
convention is cos(tau)^0 = 1 even at cos(tau) = 0, matching the identity
kernel at zero cycles.
"""

from __future__ import annotations

import math
from typing import Literal

import numpy as np

from .traces import ProbabilityTrace

ModelKind = Literal["single_qubit", "singlet_triplet", "bell"]
Parity = Literal["even", "odd", "generic"]

RESONANCE_TOL = 1e-9


def _check_n(n: int) -> int:
    n = int(n)
    if n < 0:
        raise ValueError("n must be >= 0")
    return n


def magnetization_single_qubit(n: int, tau: float) -> float:
    """Population imbalance of the measured qubit after n cycles: cos(tau)^n."""
    n = _check_n(n)
    return math.cos(tau) ** n


def probs_single_qubit(n: int, tau: float) -> np.ndarray:
    """Outcome probabilities ((1 + cos^n tau)/2, (1 - cos^n tau)/2)."""
    m = magnetization_single_qubit(n, tau)
    return np.array([(1.0 + m) / 2.0, (1.0 - m) / 2.0])


def probs_singlet_triplet(n: int, tau: float) -> np.ndarray:
    """Outcome probabilities in the singlet-triplet basis after n cycles.

    The singlet component is identically zero: the initial state lies in the
    symmetric manifold and the dynamics never leaves it.
    """
    n = _check_n(n)
    c = math.cos(tau) ** n
    # (3 cos 2tau + 1)^n / 4^n, paired to avoid overflow/underflow
    q = ((3.0 * math.cos(2.0 * tau) + 1.0) / 4.0) ** n
    p0 = (3.0 * c + q + 2.0) / 6.0
    p1 = (1.0 - q) / 3.0
    p3 = (-3.0 * c + q + 2.0) / 6.0
    return np.array([p0, p1, 0.0, p3])


def probs_bell(n: int, tau: float) -> np.ndarray:
    """Outcome probabilities in the Bell basis after n cycles.

    Components 2 and 3 are pinned at 1/2 and 0 for every n; only the first
    two states are mixed by the dynamics.
    """
    n = _check_n(n)
    c = math.cos(2.0 * tau) ** n
    return np.array([(1.0 + c) / 4.0, (1.0 - c) / 4.0, 0.5, 0.0])


def _resonance_class(tau: float, step: float) -> int | None:
    """Index p of the nearest multiple p*step within RESONANCE_TOL, else None."""
    p = round(tau / step)
    if abs(tau - p * step) <= RESONANCE_TOL:
        return int(p)
    return None


def limit_probs(model_kind: str, tau: float, parity: Parity = "generic") -> np.ndarray | None:
    """Large-n outcome probabilities of the two-qubit models, or None if divergent.

    At resonant tau (multiples of pi, and of pi/2 for the Bell case) the
    distribution alternates with the parity of n; passing parity 'even' or
    'odd' selects a subsequence limit, while 'generic' reports divergence
    (None) where the plain limit does not exist.
    """
    if parity not in ("even", "odd", "generic"):
        raise ValueError(f"unknown parity {parity!r}")
    if model_kind == "singlet_triplet":
        p = _resonance_class(tau, math.pi)
        if p is None:
            return np.array([1 / 3, 1 / 3, 0.0, 1 / 3])
        if p % 2 == 0:
            return np.array([1.0, 0.0, 0.0, 0.0])
        # odd multiple of pi: hops between psi_0 and psi_3
        if parity == "even":
            return np.array([1.0, 0.0, 0.0, 0.0])
        if parity == "odd":
            return np.array([0.0, 0.0, 0.0, 1.0])
        return None
    if model_kind == "bell":
        p = _resonance_class(tau, math.pi / 2.0)
        if p is None:
            return np.array([0.25, 0.25, 0.5, 0.0])
        if p % 2 == 0:
            return np.array([0.5, 0.0, 0.5, 0.0])
        # odd multiple of pi/2: hops between beta_0 and beta_1
        if parity == "even":
            return np.array([0.5, 0.0, 0.5, 0.0])
        if parity == "odd":
            return np.array([0.0, 0.5, 0.5, 0.0])
        return None
    raise ValueError(f"no closed-form limits for model kind {model_kind!r}")


_PROB_FUNCS = {
    "single_qubit": probs_single_qubit,
    "singlet_triplet": probs_singlet_triplet,
    "bell": probs_bell,
}


def closed_form_trace(model_kind: ModelKind, tau: float, n_max: int) -> ProbabilityTrace:
    """Stack the closed-form distributions for n = 0..n_max."""
    try:
        func = _PROB_FUNCS[model_kind]
    except KeyError:
        raise ValueError(f"no closed form for model kind {model_kind!r}") from None
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    rows = np.stack([func(n, tau) for n in range(n_max + 1)])
    return ProbabilityTrace(values=rows)
