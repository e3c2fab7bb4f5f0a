"""Exact density-matrix propagation of the measurement protocol.

One protocol cycle is: unitary evolution for a time tau, projective
dephasing onto the measurement basis, and (optionally) a depolarizing
admixture of the completely mixed state with weight gamma. All states are
plain complex128 density matrices in computational coordinates.
"""

from __future__ import annotations

from typing import Literal

import numpy as np

from . import linalg
from .model import MeasurementBasis, Model
from .traces import ProbabilityTrace

Direction = Literal["to_measurement", "to_computational"]

PSD_TOL = -1e-10


def check_density(rho: np.ndarray, trace_tol: float = 1e-12) -> np.ndarray:
    """Validate Hermiticity, unit trace, and positivity (up to solver noise)."""
    rho = linalg.require_hermitian(rho)
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"trace is {tr}, expected 1")
    eigs = linalg.eig_hermitian(rho).eigenvalues
    if float(np.min(eigs)) < PSD_TOL:
        raise ValueError(f"negative eigenvalue {np.min(eigs):.3e}")
    return rho


def initial_density(m: Model) -> np.ndarray:
    """The pure-state density matrix of the model's initial state."""
    psi = m.initial_state
    return np.outer(psi, np.conj(psi))


def born_probabilities(psi: np.ndarray, basis: MeasurementBasis) -> np.ndarray:
    """Outcome distribution |<phi_k|psi>|^2 of a pure state."""
    amps = linalg.adjoint(basis.v) @ np.asarray(psi, dtype=complex).reshape(-1)
    return np.abs(amps) ** 2


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    return gamma


def _dephase(rho: np.ndarray, basis: MeasurementBasis) -> tuple[np.ndarray, np.ndarray]:
    """Project onto the measurement basis; returns (dephased rho, populations)."""
    v = basis.v
    w = linalg.adjoint(v) @ rho @ v
    pops = np.real(np.diag(w)).copy()
    dephased = (v * pops) @ linalg.adjoint(v)
    return dephased, pops


def _cycle_with_unitary(
    rho: np.ndarray, u: np.ndarray, basis: MeasurementBasis, gamma: float
) -> tuple[np.ndarray, np.ndarray]:
    evolved = u @ rho @ linalg.adjoint(u)
    dephased, pops = _dephase(evolved, basis)
    dim = rho.shape[0]
    if gamma != 0.0:
        dephased = (1.0 - gamma) * dephased + gamma * np.eye(dim, dtype=complex) / dim
        pops = (1.0 - gamma) * pops + gamma / dim
    return dephased, pops


def cycle(rho: np.ndarray, m: Model, tau: float, gamma: float = 0.0) -> np.ndarray:
    """One full protocol cycle applied to a density matrix.

    With gamma = 0 this is the noiseless evolve-and-measure map; gamma = 1
    replaces the state by the completely mixed one.
    """
    rho = linalg.as_matrix(rho)
    if rho.shape[0] != m.dim:
        raise ValueError(f"dimension mismatch: state {rho.shape[0]}, model {m.dim}")
    gamma = _check_gamma(gamma)
    u = linalg.unitary_from_hamiltonian(m.hamiltonian, tau)
    out, _ = _cycle_with_unitary(rho, u, m.basis, gamma)
    return out


def run_exact(m: Model, tau: float, n_max: int, gamma: float = 0.0) -> ProbabilityTrace:
    """Propagate the initial state for n_max cycles, recording outcome probabilities.

    Row 0 is the Born distribution of the bare initial state (no evolution);
    row n >= 1 is the distribution after n cycles.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    gamma = _check_gamma(gamma)
    u = linalg.unitary_from_hamiltonian(m.hamiltonian, tau)
    rows = np.empty((n_max + 1, m.dim), dtype=float)
    rows[0] = born_probabilities(m.initial_state, m.basis)
    rho = initial_density(m)
    for n in range(1, n_max + 1):
        rho, pops = _cycle_with_unitary(rho, u, m.basis, gamma)
        rows[n] = pops
    return ProbabilityTrace(values=rows)


def noisy_closed_form(p_noiseless: ProbabilityTrace, gamma: float, dim: int) -> ProbabilityTrace:
    """Fold a per-cycle depolarizing channel into a noiseless trace.

    Row n becomes (1-gamma)^n * row_n + (1 - (1-gamma)^n) / dim; valid because
    the measurement cycle and the depolarizing channel are both unital and
    therefore commute.
    """
    gamma = _check_gamma(gamma)
    if dim != p_noiseless.dim:
        raise ValueError("dim does not match the trace")
    ns = np.arange(p_noiseless.n_max + 1, dtype=float)
    survival = (1.0 - gamma) ** ns
    mixed = (1.0 - survival) / dim
    values = survival[:, None] * p_noiseless.values + mixed[:, None]
    return ProbabilityTrace(values=values)


def rho_in_basis(rho: np.ndarray, basis: MeasurementBasis, direction: Direction) -> np.ndarray:
    """Re-express a density matrix between computational and measurement coordinates."""
    rho = linalg.as_matrix(rho)
    if rho.shape[0] != basis.dim:
        raise ValueError("dimension mismatch")
    v = basis.v
    if direction == "to_measurement":
        return linalg.rotate_matrix(rho, v)
    if direction == "to_computational":
        return linalg.rotate_matrix(rho, linalg.adjoint(v))
    raise ValueError(f"unknown direction {direction!r}")
