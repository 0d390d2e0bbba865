"""Exact diagonalization, coupling scans, convergence checks, collapse search.

Truncated diagonalization is variational: eigenvalues can only move down (or
stay) as the Fock cutoff grows. Convergence of a quantity is therefore
certified by recomputing at a 25% larger cutoff and bounding the change.
A model past its spectral collapse has no bounded ground state, which shows
up as a ground level that keeps dropping as the cutoff increases; the
collapse detector bisects on that instability indicator.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .fock import HilbertSpace, OperatorMatrix
from .models import (
    ModelSpec,
    ModelConfigError,
    build_hamiltonian,
    parity_operator,
)

LEVEL_CONVERGENCE_TOL = 1e-6       # in units of omega_c
STEADY_CONVERGENCE_TOL = 1e-4      # relative, per observable
COLLAPSE_DROP_TOL = 1e-3           # ground-level drop flagging instability
DEGENERACY_TIE_TOL = 1e-9


class HermiticityError(ValueError):
    """Input matrix is not Hermitian within tolerance."""


class IntervalError(ValueError):
    """Collapse search interval does not bracket the instability onset."""


def eigenspectrum(H: OperatorMatrix, k: int, want_vectors: bool = False,
                  herm_tol: float = 1e-12):
    """k lowest eigenvalues of a Hermitian operator, ascending.

    With want_vectors=True also returns the (dim, k) matrix of orthonormal
    eigenvectors. Raises HermiticityError if H deviates from H^dag by more
    than herm_tol relative to its largest entry.
    """
    if not 1 <= k <= H.space.total_dim:
        raise ValueError(f"k={k} outside 1..{H.space.total_dim}")
    if not H.is_hermitian(herm_tol):
        raise HermiticityError("matrix is not Hermitian within tolerance")
    mat = H.entries
    if want_vectors:
        vals, vecs = scipy.linalg.eigh(mat, subset_by_index=(0, k - 1))
        return vals, vecs
    return scipy.linalg.eigh(mat, eigvals_only=True, subset_by_index=(0, k - 1))


def _levels_at_cutoff(spec: ModelSpec, cutoff: int, k: int) -> np.ndarray:
    space = HilbertSpace(spec.n_qubits, cutoff)
    return eigenspectrum(build_hamiltonian(spec, space), k)


@dataclass
class ConvergenceReport:
    converged: bool
    relative_change: float
    cutoff: int
    cutoff_checked: int


def cutoff_convergence(spec: ModelSpec, observable: str, cutoff: int,
                       k: int = 10, drive=None) -> ConvergenceReport:
    """Certify that a cutoff does not alter the tracked quantities.

    observable 'levels' tracks the k lowest eigenvalues (change measured in
    units of omega_c, tolerance 1e-6); 'steady_observables' tracks the
    steady-state transmission record for the given drive (relative change,
    tolerance 1e-4). The comparison cutoff is ceil(1.25 * cutoff).
    """
    if cutoff < 8:
        raise ValueError("cutoff_convergence needs cutoff >= 8")
    bigger = math.ceil(1.25 * cutoff)
    if observable == "levels":
        lo = _levels_at_cutoff(spec, cutoff, k)
        hi = _levels_at_cutoff(spec, bigger, k)
        change = float(np.max(np.abs(lo - hi))) / spec.omega_c
        tol = LEVEL_CONVERGENCE_TOL
    elif observable == "steady_observables":
        if drive is None:
            raise ValueError("steady_observables convergence needs a drive")
        from .scattering import MOMENT_RESOLUTION, steady_point_record

        lo = steady_point_record(spec, drive, cutoff)
        hi = steady_point_record(spec, drive, bigger)
        changes = [0.0]
        for name in ("n_out", "t_value"):
            a, b = getattr(lo, name), getattr(hi, name)
            if a is not None and b is not None:
                changes.append(abs(a - b) / max(abs(b), 1e-18))
        for ratio, moment in (("g2", "m2"), ("g3", "m3")):
            a, b = getattr(lo, ratio), getattr(hi, ratio)
            if a is None or b is None:
                continue
            if min(getattr(lo, moment), getattr(hi, moment)) <= MOMENT_RESOLUTION:
                continue
            changes.append(abs(a - b) / max(abs(b), 1e-18))
        change = float(max(changes))
        tol = STEADY_CONVERGENCE_TOL
    else:
        raise ValueError(f"unknown observable {observable!r}")
    return ConvergenceReport(converged=change < tol, relative_change=change,
                             cutoff=cutoff, cutoff_checked=bigger)


@dataclass
class SpectrumScan:
    """Levels and parity labels versus a swept coupling."""

    parameter_name: str
    grid: np.ndarray
    levels: np.ndarray        # shape (npoints, k), ascending rows
    parities: np.ndarray      # shape (npoints, k), expectation of the parity
    cutoff_used: int
    converged: np.ndarray     # shape (npoints,), bool


def _scan_point(spec: ModelSpec, coupling: float, k: int, cutoff: int):
    point_spec = spec.with_coupling(coupling)
    space = HilbertSpace(point_spec.n_qubits, cutoff)
    h = build_hamiltonian(point_spec, space)
    vals, vecs = eigenspectrum(h, k, want_vectors=True)
    par_op = parity_operator(point_spec, space).entries
    pars = np.real(np.einsum("ij,jk,ki->i", vecs.conj().T, par_op, vecs))
    # deterministic order for degenerate pairs: +1 parity first
    order = np.lexsort((-pars, np.round(vals / DEGENERACY_TIE_TOL)))
    vals, pars = vals[order], pars[order]
    bigger = math.ceil(1.25 * cutoff)
    check = _levels_at_cutoff(point_spec, bigger, k)
    conv = bool(np.max(np.abs(vals[np.argsort(vals)] - check)) / spec.omega_c
                < LEVEL_CONVERGENCE_TOL)
    return vals, pars, conv


def coupling_scan(spec_template: ModelSpec, coupling_grid, k: int, cutoff: int,
                  workers: int = 1) -> SpectrumScan:
    """k lowest levels per grid point, with parity labels and convergence flags.

    The swept parameter is the variant's coupling (g for one-photon variants,
    g2 otherwise). Non-convergent points are flagged, not fatal.
    """
    grid = np.asarray(coupling_grid, dtype=float)
    if grid.size == 0 or np.any(np.diff(grid) < 0):
        raise ValueError("coupling grid must be nonempty and ascending")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(
                lambda c: _scan_point(spec_template, c, k, cutoff), grid))
    else:
        rows = [_scan_point(spec_template, c, k, cutoff) for c in grid]
    name = "g" if spec_template.variant in ("jc", "qrm", "bs_effective",
                                            "dispersive_jc") else "g2"
    return SpectrumScan(
        parameter_name=name,
        grid=grid,
        levels=np.array([r[0] for r in rows]),
        parities=np.array([r[1] for r in rows]),
        cutoff_used=cutoff,
        converged=np.array([r[2] for r in rows], dtype=bool),
    )


@dataclass
class CollapseEstimate:
    g_col: float
    bracket_low: float
    bracket_high: float
    cutoff: int


_COLLAPSE_VARIANTS = ("two_photon_qrm_full", "two_photon_qrm_pure",
                      "multiqubit_two_photon")


def detect_collapse(spec_template: ModelSpec, search_interval, cutoff: int = 150,
                    drop_tol: float = COLLAPSE_DROP_TOL,
                    rel_width: float = 2e-3) -> CollapseEstimate:
    """Bisection estimate of the coupling where the spectrum loses its bottom.

    The instability indicator compares the ground level at round(cutoff/1.5)
    and at cutoff: a drop larger than drop_tol (in units of omega_c) marks the
    unbounded regime. The indicator must differ at the interval endpoints.
    """
    if spec_template.variant not in _COLLAPSE_VARIANTS:
        raise ModelConfigError(
            f"collapse detection needs a quadratic-coupling variant, "
            f"got {spec_template.variant!r}")
    lo, hi = float(search_interval[0]), float(search_interval[1])
    if not 0 <= lo < hi:
        raise IntervalError(f"bad search interval ({lo}, {hi})")
    c_small = int(round(cutoff / 1.5))

    def unstable(g: float) -> bool:
        e_small = _levels_at_cutoff(spec_template.with_coupling(g), c_small, 1)[0]
        e_big = _levels_at_cutoff(spec_template.with_coupling(g), cutoff, 1)[0]
        return (e_small - e_big) > drop_tol * spec_template.omega_c

    if unstable(lo):
        raise IntervalError(f"lower endpoint {lo} already unstable")
    if not unstable(hi):
        raise IntervalError(f"upper endpoint {hi} still stable")
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if hi - lo < rel_width * mid:
            break
        if unstable(mid):
            hi = mid
        else:
            lo = mid
    mid = 0.5 * (lo + hi)
    return CollapseEstimate(g_col=mid, bracket_low=lo, bracket_high=hi,
                            cutoff=cutoff)


def write_spectrum_csv(scan: SpectrumScan, path) -> None:
    """ScanResult CSV: swept value, levels, parities, converged flag."""
    k = scan.levels.shape[1]
    header = ([scan.parameter_name]
              + [f"level_{i}" for i in range(k)]
              + [f"parity_{i}" for i in range(k)]
              + ["converged"])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i, x in enumerate(scan.grid):
            row = [f"{x:.17g}"]
            row += [f"{v:.17g}" for v in scan.levels[i]]
            row += [f"{v:.17g}" for v in scan.parities[i]]
            row.append(str(bool(scan.converged[i])).lower())
            writer.writerow(row)
