"""Probability traces: outcome distributions indexed by measurement count."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ROW_SUM_TOL = 1e-12


@dataclass(frozen=True)
class ProbabilityTrace:
    """Outcome probabilities P[n, k] for n = 0..n_max over N basis states.

    Row n is the distribution immediately after n measurement cycles; row 0
    is the Born distribution of the initial state in the measurement basis.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError(f"expected a (n_max+1, N) array, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("trace has non-finite entries")
        if np.min(v) < -ROW_SUM_TOL:
            raise ValueError(f"negative probability {np.min(v):.3e}")
        row_err = np.max(np.abs(v.sum(axis=1) - 1.0))
        if row_err > ROW_SUM_TOL:
            raise ValueError(f"rows do not sum to 1 (max error {row_err:.3e})")
        object.__setattr__(self, "values", v)

    @property
    def n_max(self) -> int:
        return self.values.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.values.shape[1]
