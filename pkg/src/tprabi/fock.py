"""Elementary operators on truncated qubit-boson Hilbert spaces.

The composite space is a tensor product with a fixed factor order: qubit
factors first (qubit 0 leftmost), the single boson mode last. All operators
are dense complex matrices wrapped in :class:`OperatorMatrix`; they are
immutable after construction and safe to share across scan workers.

Truncation convention: the boson mode keeps Fock levels 0..n_max, and the
creation operator maps the top level |n_max> to 0 (no wraparound). Results
that are sensitive to the cutoff must be certified by the convergence check
in :mod:`tprabi.spectra`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np


class InvalidSpaceError(ValueError):
    """Raised when an operator is requested on a space that cannot hold it."""


class QubitIndexError(IndexError):
    """Raised for a qubit index outside 0..n_qubits-1."""


class ShapeMismatchError(ValueError):
    """Raised when operator dimensions are inconsistent."""


@dataclass(frozen=True)
class HilbertSpace:
    """Truncated tensor-product space of n_qubits two-level systems and one boson mode.

    fock_cutoff is the maximum photon number n_max; the boson factor has
    dimension n_max + 1. n_qubits may be zero (bare cavity).
    """

    n_qubits: int
    fock_cutoff: int

    def __post_init__(self):
        if self.n_qubits < 0:
            raise InvalidSpaceError(f"n_qubits must be >= 0, got {self.n_qubits}")
        if self.fock_cutoff < 0:
            raise InvalidSpaceError(f"fock_cutoff must be >= 0, got {self.fock_cutoff}")

    @property
    def boson_dim(self) -> int:
        return self.fock_cutoff + 1

    @property
    def qubit_dim(self) -> int:
        return 2 ** self.n_qubits

    @property
    def total_dim(self) -> int:
        return self.qubit_dim * self.boson_dim


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex square matrix attached to a HilbertSpace."""

    space: HilbertSpace
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex)
        d = self.space.total_dim
        if arr.shape != (d, d):
            raise ShapeMismatchError(
                f"operator shape {arr.shape} does not match space dimension {d}"
            )
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    # Small closed algebra so Hamiltonian builders read like the formulas.
    def _check(self, other: "OperatorMatrix"):
        if self.space != other.space:
            raise ShapeMismatchError("operators live on different spaces")

    def __add__(self, other):
        self._check(other)
        return OperatorMatrix(self.space, self.entries + other.entries)

    def __sub__(self, other):
        self._check(other)
        return OperatorMatrix(self.space, self.entries - other.entries)

    def __mul__(self, scalar):
        return OperatorMatrix(self.space, self.entries * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return OperatorMatrix(self.space, -self.entries)

    def __matmul__(self, other):
        self._check(other)
        return OperatorMatrix(self.space, self.entries @ other.entries)

    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.space, self.entries.conj().T)

    def is_hermitian(self, rel_tol: float = 1e-12) -> bool:
        h = self.entries
        scale = max(np.abs(h).max(), 1e-300)
        return np.abs(h - h.conj().T).max() <= rel_tol * scale


_PAULI_2X2 = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
    "plus": np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex),
    "minus": np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex),
}


def _embed_boson(space: HilbertSpace, boson_op: np.ndarray) -> OperatorMatrix:
    full = np.kron(np.eye(space.qubit_dim, dtype=complex), boson_op)
    return OperatorMatrix(space, full)


def identity(space: HilbertSpace) -> OperatorMatrix:
    return OperatorMatrix(space, np.eye(space.total_dim, dtype=complex))


def annihilation(space: HilbertSpace) -> OperatorMatrix:
    """Boson annihilation a with <n-1|a|n> = sqrt(n), identity on all qubits."""
    if space.fock_cutoff < 1:
        raise InvalidSpaceError(
            "boson operators need fock_cutoff >= 1, got "
            f"{space.fock_cutoff}"
        )
    a = np.diag(np.sqrt(np.arange(1, space.boson_dim, dtype=float)), 1).astype(complex)
    return _embed_boson(space, a)


def creation(space: HilbertSpace) -> OperatorMatrix:
    return annihilation(space).dag()


def number_operator(space: HilbertSpace) -> OperatorMatrix:
    if space.fock_cutoff < 1:
        raise InvalidSpaceError("boson operators need fock_cutoff >= 1")
    n = np.diag(np.arange(space.boson_dim, dtype=float)).astype(complex)
    return _embed_boson(space, n)


def photon_parity(space: HilbertSpace) -> OperatorMatrix:
    """Photon-number parity exp(i pi a^dag a): diagonal (-1)^n, identity on qubits."""
    par = np.diag((-1.0) ** np.arange(space.boson_dim)).astype(complex)
    return _embed_boson(space, par)


def pauli(space: HilbertSpace, which: str, qubit_index: int = 0) -> OperatorMatrix:
    """Pauli operator on one qubit slot, identity elsewhere.

    which is one of 'x', 'y', 'z', 'plus', 'minus'; sigma_pm = (sigma_x +- i sigma_y)/2.
    Basis per qubit: index 0 is the sigma_z = +1 (excited) state.
    """
    if which not in _PAULI_2X2:
        raise KeyError(f"unknown Pauli label {which!r}")
    if not 0 <= qubit_index < space.n_qubits:
        raise QubitIndexError(
            f"qubit_index {qubit_index} out of range for {space.n_qubits} qubit(s)"
        )
    mats = []
    for i in range(space.n_qubits):
        mats.append(_PAULI_2X2[which] if i == qubit_index else np.eye(2, dtype=complex))
    mats.append(np.eye(space.boson_dim, dtype=complex))
    full = reduce(np.kron, mats)
    return OperatorMatrix(space, full)


def tensor(ops: list[np.ndarray], space: HilbertSpace | None = None) -> OperatorMatrix:
    """Kronecker product of factor matrices, qubits first and boson last.

    Factor dimensions must multiply to the dimension of `space`; when `space`
    is None it is inferred from the factors (all leading factors 2x2, last
    factor is the boson).
    """
    if not ops:
        raise ShapeMismatchError("tensor() needs at least one factor")
    dims = []
    for op in ops:
        arr = np.asarray(op)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ShapeMismatchError(f"tensor factor has non-square shape {arr.shape}")
        dims.append(arr.shape[0])
    if space is None:
        n_qubits = len(dims) - 1
        if any(d != 2 for d in dims[:-1]):
            raise ShapeMismatchError(
                "cannot infer space: leading factors must be 2x2 qubits"
            )
        space = HilbertSpace(n_qubits=n_qubits, fock_cutoff=dims[-1] - 1)
    total = int(np.prod(dims))
    if total != space.total_dim:
        raise ShapeMismatchError(
            f"factor dimensions {dims} give {total}, space has {space.total_dim}"
        )
    full = reduce(np.kron, [np.asarray(op, dtype=complex) for op in ops])
    return OperatorMatrix(space, full)


def fock_state(space: HilbertSpace, n: int, qubit_levels: tuple[int, ...] = ()) -> np.ndarray:
    """State vector |q_0 ... q_{N-1}, n>; qubit level 0 = excited, 1 = ground."""
    if not 0 <= n <= space.fock_cutoff:
        raise InvalidSpaceError(f"Fock level {n} outside 0..{space.fock_cutoff}")
    levels = tuple(qubit_levels) if qubit_levels else (1,) * space.n_qubits
    if len(levels) != space.n_qubits or any(q not in (0, 1) for q in levels):
        raise InvalidSpaceError(f"bad qubit levels {qubit_levels}")
    idx = 0
    for q in levels:
        idx = idx * 2 + q
    idx = idx * space.boson_dim + n
    vec = np.zeros(space.total_dim, dtype=complex)
    vec[idx] = 1.0
    return vec
