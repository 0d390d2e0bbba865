"""Lindblad master equation: superoperators, steady states, time evolution.

The equation of motion is rho_dot = i[rho, H] + gamma D[a] rho
+ gamma_q D[sigma_-] rho + gamma_phi D[sigma_z] rho with
D[O] rho = O rho O^dag - {O^dag O, rho}/2 (phenomenological local form).

Vectorization is column-stacking throughout: vec(rho) stacks columns, so
vec(A rho B) = (B^T kron A) vec(rho) and the matrix element (i, j) of rho
lives at vector index i + j*dim. Superoperators are stored sparse (they are
built from banded operators), density matrices stay dense.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp
from scipy.sparse.linalg import splu

from .fock import (
    HilbertSpace,
    OperatorMatrix,
    ShapeMismatchError,
    annihilation,
    pauli,
)

UNIQUENESS_GAP_TOL = 1e-10


class NonUniqueSteadyStateError(RuntimeError):
    """Steady state is degenerate or nearly so; carries the gap estimate."""

    def __init__(self, message: str, gap_estimate: float):
        super().__init__(message)
        self.gap_estimate = gap_estimate


class StiffnessError(RuntimeError):
    """Adaptive integration failed to reach t_final."""


@dataclass(frozen=True)
class LindbladConfig:
    """Dissipation rates in units of omega_c: cavity decay, qubit decay, pure dephasing."""

    gamma: float = 0.0
    gamma_q: float = 0.0
    gamma_phi: float = 0.0

    def __post_init__(self):
        for name in ("gamma", "gamma_q", "gamma_phi"):
            if getattr(self, name) < 0:
                raise ValueError(f"rate {name} must be >= 0")


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace positive-semidefinite state on a HilbertSpace."""

    space: HilbertSpace
    entries: np.ndarray = field(repr=False)

    HERM_TOL = 1e-10
    TRACE_TOL = 1e-10
    EIG_FLOOR = -1e-8

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex)
        d = self.space.total_dim
        if arr.shape != (d, d):
            raise ShapeMismatchError(f"state shape {arr.shape}, space dim {d}")
        scale = max(np.abs(arr).max(), 1e-300)
        if np.abs(arr - arr.conj().T).max() > self.HERM_TOL * max(1.0, scale):
            raise ValueError("density matrix is not Hermitian within 1e-10")
        if abs(np.trace(arr).real - 1.0) > self.TRACE_TOL or abs(np.trace(arr).imag) > self.TRACE_TOL:
            raise ValueError("density matrix trace differs from 1 beyond 1e-10")
        if np.linalg.eigvalsh(0.5 * (arr + arr.conj().T)).min() < self.EIG_FLOOR:
            raise ValueError("density matrix has an eigenvalue below -1e-8")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)


def vectorize(rho: np.ndarray) -> np.ndarray:
    return np.reshape(rho, -1, order="F")


def unvectorize(vec: np.ndarray, dim: int) -> np.ndarray:
    return np.reshape(vec, (dim, dim), order="F")


@dataclass(frozen=True)
class Liouvillian:
    """Sparse superoperator L with rho_dot = L vec(rho)."""

    space: HilbertSpace
    matrix: sp.csc_matrix = field(repr=False)

    @property
    def dim(self) -> int:
        return self.space.total_dim


def dissipator(op: OperatorMatrix, rate: float) -> sp.csc_matrix:
    """rate * D[op] as a sparse superoperator (column-stacking convention)."""
    if rate < 0:
        raise ValueError("dissipator rate must be >= 0")
    d = op.space.total_dim
    o = sp.csr_matrix(op.entries)
    odo = (o.conj().T @ o).tocsr()
    eye = sp.identity(d, dtype=complex, format="csr")
    out = sp.kron(o.conj(), o) - 0.5 * (sp.kron(eye, odo) + sp.kron(odo.T, eye))
    return (rate * out).tocsc()


def _hamiltonian_part(H: OperatorMatrix) -> sp.csc_matrix:
    d = H.space.total_dim
    h = sp.csr_matrix(H.entries)
    eye = sp.identity(d, dtype=complex, format="csr")
    return (1j * (sp.kron(h.T, eye) - sp.kron(eye, h))).tocsc()


def build_liouvillian(H: OperatorMatrix, cfg: LindbladConfig) -> Liouvillian:
    """Full generator i[rho, H] + cavity decay + qubit decay + dephasing.

    Qubit dissipators act on qubit 0; configuring qubit rates on a space
    without qubits raises.
    """
    space = H.space
    if not H.is_hermitian(1e-10):
        raise ValueError("Liouvillian needs a Hermitian Hamiltonian")
    L = _hamiltonian_part(H)
    if cfg.gamma > 0:
        L = L + dissipator(annihilation(space), cfg.gamma)
    if cfg.gamma_q > 0 or cfg.gamma_phi > 0:
        if space.n_qubits < 1:
            raise ShapeMismatchError("qubit rates set but the space has no qubit")
        if cfg.gamma_q > 0:
            L = L + dissipator(pauli(space, "minus", 0), cfg.gamma_q)
        if cfg.gamma_phi > 0:
            L = L + dissipator(pauli(space, "z", 0), cfg.gamma_phi)
    return Liouvillian(space=space, matrix=L.tocsc())


def _trace_row(d: int) -> np.ndarray:
    row = np.zeros(d * d, dtype=complex)
    row[np.arange(d) * (d + 1)] = 1.0
    return row


def _min_singular_estimate(lu, d2: int, iters: int = 8) -> float:
    """Inverse-power estimate of the smallest singular value of the factored matrix."""
    rng = np.random.default_rng(7)
    v = rng.standard_normal(d2) + 1j * rng.standard_normal(d2)
    v /= np.linalg.norm(v)
    est = np.inf
    for _ in range(iters):
        w = lu.solve(lu.solve(v, trans="N"), trans="H")
        nw = np.linalg.norm(w)
        if not np.isfinite(nw) or nw == 0.0:
            return 0.0
        est = 1.0 / np.sqrt(nw)
        v = w / nw
    return est


def steady_state(L: Liouvillian, check_uniqueness: bool = True) -> DensityMatrix:
    """Unique stationary state: solve L rho = 0 with the trace row pinned to 1.

    The first row of L is replaced by the trace functional. Uniqueness is
    certified by an inverse-power estimate of the smallest singular value of
    the constrained system (a proxy for the Liouvillian spectral gap) plus
    the residual ||L vec(rho)||.
    """
    d = L.dim
    m = L.matrix.tolil(copy=True)
    m[0, :] = _trace_row(d)
    m = m.tocsc()
    rhs = np.zeros(d * d, dtype=complex)
    rhs[0] = 1.0
    try:
        lu = splu(m)
        x = lu.solve(rhs)
    except RuntimeError as err:  # structurally singular factorization
        raise NonUniqueSteadyStateError(
            f"steady state not unique: singular system ({err})", 0.0) from err
    if not np.all(np.isfinite(x)):
        raise NonUniqueSteadyStateError(
            "steady state not unique: non-finite solve", 0.0)
    if check_uniqueness:
        gap = _min_singular_estimate(lu, d * d)
        if gap < UNIQUENESS_GAP_TOL:
            raise NonUniqueSteadyStateError(
                f"steady state not unique: gap estimate {gap:.3e}", gap)
    residual = np.linalg.norm(L.matrix @ x)
    scale = sp.linalg.norm(L.matrix)
    if not residual <= 1e-9 * max(scale, 1.0):
        raise NonUniqueSteadyStateError(
            f"steady-state residual {residual:.3e} exceeds 1e-9 * ||L||", 0.0)
    rho = unvectorize(x, d)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    return DensityMatrix(L.space, rho)


def evolve(rho0: DensityMatrix, L: Liouvillian, t_final: float,
           dt: float | None = None) -> DensityMatrix:
    """Integrate rho_dot = L vec(rho) from 0 to t_final (adaptive RK45).

    dt, when given, seeds the initial step. Trace and Hermiticity drift are
    checked to stay below 1e-8 before the state is symmetrized and returned.
    """
    if rho0.space != L.space:
        raise ShapeMismatchError("state and Liouvillian live on different spaces")
    if t_final < 0:
        raise ValueError("t_final must be >= 0")
    if t_final == 0:
        return rho0
    mat = L.matrix
    y0 = vectorize(np.asarray(rho0.entries))
    sol = solve_ivp(
        lambda _t, y: mat @ y, (0.0, t_final), y0, method="RK45",
        rtol=1e-10, atol=1e-13, first_step=dt, dense_output=False)
    if not sol.success:
        raise StiffnessError(f"integration failed: {sol.message}")
    rho = unvectorize(sol.y[:, -1], L.dim)
    herm_drift = np.abs(rho - rho.conj().T).max()
    trace_drift = abs(np.trace(rho) - 1.0)
    if herm_drift > 1e-8 or trace_drift > 1e-8:
        raise StiffnessError(
            f"integration drift too large: hermiticity {herm_drift:.2e}, "
            f"trace {trace_drift:.2e}")
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    return DensityMatrix(L.space, rho)


def expectation(rho: DensityMatrix, op: OperatorMatrix) -> complex:
    """tr(rho op)."""
    if rho.space != op.space:
        raise ShapeMismatchError("state and operator live on different spaces")
    return complex(np.trace(rho.entries @ op.entries))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """(1/2) ||rho - sigma||_1."""
    if rho.space != sigma.space:
        raise ShapeMismatchError("states live on different spaces")
    diff = rho.entries - sigma.entries
    return 0.5 * float(np.abs(np.linalg.eigvalsh(diff)).sum())


def liouvillian_eigenvalues(L: Liouvillian) -> np.ndarray:
    """Dense spectrum of the generator; intended for small test spaces."""
    return np.linalg.eigvals(L.matrix.toarray())
