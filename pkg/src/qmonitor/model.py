"""Concrete experiment families: Hamiltonian, measurement basis, initial state.

Three built-in models are provided: a single qubit rotating about x and
measured along z, and two non-interacting rotating qubits measured either in
the singlet-triplet basis or in the Bell basis. Custom models load from JSON.

Basis convention: column k of ``MeasurementBasis.v`` holds the k-th
measurement state written in computational coordinates, so the projector onto
outcome k is v_k v_k^dagger = V |k><k| V^dagger. This one orientation is used
everywhere; tests pin it against the known matrix elements of the two-qubit
models.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import linalg

BasisKind = Literal["singlet_triplet", "bell"]

_SQ2 = np.sqrt(2.0)

MODEL_NAMES = ("single_qubit", "two_qubit_singlet_triplet", "two_qubit_bell")


def pauli(which: str) -> np.ndarray:
    """The 2x2 Pauli matrix for axis 'x', 'y' or 'z'."""
    if which == "x":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if which == "y":
        return np.array([[0, -1j], [1j, 0]], dtype=complex)
    if which == "z":
        return np.array([[1, 0], [0, -1]], dtype=complex)
    raise ValueError(f"unknown Pauli axis {which!r}")


@dataclass(frozen=True)
class MeasurementBasis:
    """An orthonormal measurement basis with human-readable outcome labels."""

    dim: int
    v: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        v = linalg.as_matrix(self.v)
        if v.shape[0] != self.dim:
            raise ValueError("basis matrix does not match dim")
        if len(self.labels) != self.dim:
            raise ValueError("need one label per basis state")
        if not linalg.is_unitary(v):
            raise ValueError("basis matrix is not unitary")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    def projector(self, k: int) -> np.ndarray:
        """Rank-one projector onto outcome k, in computational coordinates."""
        col = self.v[:, k]
        return np.outer(col, np.conj(col))


@dataclass(frozen=True)
class Model:
    """A Hamiltonian, a measurement basis, and an initial pure state."""

    dim: int
    hamiltonian: np.ndarray
    basis: MeasurementBasis
    initial_state: np.ndarray

    def __post_init__(self):
        h = linalg.require_hermitian(self.hamiltonian)
        if h.shape[0] != self.dim or self.basis.dim != self.dim:
            raise ValueError("inconsistent dimensions")
        psi = np.asarray(self.initial_state, dtype=complex).reshape(-1)
        if psi.shape[0] != self.dim:
            raise ValueError("initial state has wrong length")
        norm = float(np.linalg.norm(psi))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"initial state is not normalized (norm {norm})")
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "initial_state", psi)


@dataclass(frozen=True)
class BlockStructure:
    """Partition of basis indices into dynamically coupled groups."""

    blocks: tuple[tuple[int, ...], ...]
    threshold: float

    def as_lists(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]


def computational_basis(dim: int, labels: tuple[str, ...] | None = None) -> MeasurementBasis:
    if labels is None:
        if dim == 2:
            labels = ("0", "1")
        else:
            width = max(1, (dim - 1).bit_length())
            labels = tuple(format(k, f"0{width}b") for k in range(dim))
    return MeasurementBasis(dim=dim, v=np.eye(dim, dtype=complex), labels=labels)


def single_qubit_model() -> Model:
    """Qubit rotating about x (H = sigma_x / 2), measured along z, starting in |0>."""
    h = 0.5 * pauli("x")
    return Model(
        dim=2,
        hamiltonian=h,
        basis=computational_basis(2),
        initial_state=np.array([1.0, 0.0], dtype=complex),
    )


def _two_qubit_hamiltonian() -> np.ndarray:
    sx = pauli("x")
    eye = np.eye(2, dtype=complex)
    return 0.5 * (linalg.kron(sx, eye) + linalg.kron(eye, sx))


def singlet_triplet_basis() -> MeasurementBasis:
    # columns: |00>, (|01>+|10>)/sqrt2, (|10>-|01>)/sqrt2 (singlet), |11>
    v = np.array(
        [
            [1, 0, 0, 0],
            [0, 1 / _SQ2, -1 / _SQ2, 0],
            [0, 1 / _SQ2, 1 / _SQ2, 0],
            [0, 0, 0, 1],
        ],
        dtype=complex,
    )
    return MeasurementBasis(dim=4, v=v, labels=("psi_0", "psi_1", "psi_2", "psi_3"))


def bell_basis() -> MeasurementBasis:
    # columns: the four Bell states (|00>+|11>, |01>+|10>, |00>-|11>, |01>-|10>)/sqrt2
    v = (
        np.array(
            [
                [1, 0, 1, 0],
                [0, 1, 0, 1],
                [0, 1, 0, -1],
                [1, 0, -1, 0],
            ],
            dtype=complex,
        )
        / _SQ2
    )
    return MeasurementBasis(dim=4, v=v, labels=("beta_0", "beta_1", "beta_2", "beta_3"))


def two_qubit_model(basis_kind: BasisKind) -> Model:
    """Two non-interacting rotating qubits starting in |00>, measured in an entangled basis."""
    if basis_kind == "singlet_triplet":
        basis = singlet_triplet_basis()
    elif basis_kind == "bell":
        basis = bell_basis()
    else:
        raise ValueError(f"unknown basis kind {basis_kind!r}")
    psi0 = np.zeros(4, dtype=complex)
    psi0[0] = 1.0
    return Model(dim=4, hamiltonian=_two_qubit_hamiltonian(), basis=basis, initial_state=psi0)


def hamiltonian_in_basis(m: Model) -> np.ndarray:
    """The Hamiltonian expressed in measurement coordinates: V^dag H V.

    Uses the FMA-free rotation so that decoupled (dark) rows and columns come
    out as exact zeros rather than O(eps) dust.
    """
    return linalg.rotate_matrix(m.hamiltonian, m.basis.v)


def detect_blocks(h_in_basis: np.ndarray, threshold: float = 1e-10) -> BlockStructure:
    """Connected components of the coupling graph |h_kk'| > threshold (k != k').

    Singleton components are allowed; the partition always covers all indices.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    h = linalg.as_matrix(h_in_basis)
    n = h.shape[0]
    seen = [False] * n
    blocks: list[tuple[int, ...]] = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and i != j and abs(h[i, j]) > threshold:
                    seen[j] = True
                    stack.append(j)
        blocks.append(tuple(sorted(comp)))
    blocks.sort(key=lambda b: b[0])
    return BlockStructure(blocks=tuple(blocks), threshold=float(threshold))


def _complex_array(obj, name: str) -> np.ndarray:
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad {name!r} entry in model file: {exc}") from exc
    if re.shape != im.shape:
        raise ValueError(f"{name!r}: re and im shapes differ")
    return re + 1j * im


def model_from_dict(spec: dict) -> Model:
    """Build a custom model from a parsed JSON object.

    Expected keys: ``hamiltonian`` and ``basis`` as {"re": [[..]], "im": [[..]]}
    (im optional), ``initial_state`` as {"re": [..], "im": [..]}, and an
    optional ``labels`` list.
    """
    h = _complex_array(spec["hamiltonian"], "hamiltonian")
    dim = h.shape[0]
    if "basis" in spec:
        v = _complex_array(spec["basis"], "basis")
    else:
        v = np.eye(dim, dtype=complex)
    labels = tuple(spec.get("labels", computational_basis(dim).labels))
    psi = _complex_array(spec["initial_state"], "initial_state").reshape(-1)
    basis = MeasurementBasis(dim=dim, v=v, labels=labels)
    return Model(dim=dim, hamiltonian=h, basis=basis, initial_state=psi)


def model_from_file(path) -> Model:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"model file {path}: invalid JSON ({exc})") from exc
    if not isinstance(spec, dict):
        raise ValueError(f"model file {path}: expected a JSON object")
    try:
        return model_from_dict(spec)
    except KeyError as exc:
        raise ValueError(f"model file {path}: missing key {exc}") from exc


def build_model(name: str) -> Model:
    """Resolve a built-in model name or a path to a custom model JSON file."""
    if name == "single_qubit":
        return single_qubit_model()
    if name == "two_qubit_singlet_triplet":
        return two_qubit_model("singlet_triplet")
    if name == "two_qubit_bell":
        return two_qubit_model("bell")
    return model_from_file(name)
