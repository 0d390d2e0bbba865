"""Driven-dissipative observables: transmission and photon correlations.

A continuous coherent tone of intensity D drives either the cavity or the
qubit. In the frame that makes the RWA Hamiltonian static the drive enters
with amplitude D/2, calibrated so that an empty cavity driven on resonance
holds (D/gamma)^2 photons; with the input flux n_in = D^2/gamma this makes
the empty-cavity resonant transmission exactly 1.

Output-port convention: the observed field is sqrt(gamma) a with vacuum
input on the observation waveguide, so n_out = gamma <a^dag a>,
T = gamma^2 <a^dag a> / D^2 and the output correlations equal the
intracavity ones: g2 = <a^dag2 a^2>/<a^dag a>^2, g3 = <a^dag3 a^3>/<a^dag a>^3.
Qubit-driven transmission is normalized by the same n_in for comparability.

Frames are only constructed for the RWA-compatible variants (jc and
two_photon_jc) and only in the strong-coupling window where dropping the
counter-rotating terms is defensible (couplings at most 0.05 omega_c).
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .fock import HilbertSpace, OperatorMatrix, annihilation, number_operator, pauli
from .liouville import (
    DensityMatrix,
    LindbladConfig,
    NonUniqueSteadyStateError,
    build_liouvillian,
    steady_state,
)
from .models import ModelSpec, ModelConfigError

SC_COUPLING_GUARD = 0.05
CORRELATION_FLOOR = 1e-14
STEADY_CONVERGENCE_TOL = 1e-4
# Dense-solve moments are resolved to roughly 1e-13 absolute; ratios built on
# smaller moments are numerical noise and stay out of the convergence check.
MOMENT_RESOLUTION = 1e-9


class UnsupportedVariantError(ModelConfigError):
    """Rotating frame requested for a variant without a static frame."""


@dataclass(frozen=True)
class DriveConfig:
    """Coherent drive: where it couples, its frequency and intensity, the bath rates."""

    target: str
    omega_d: float
    intensity: float
    lindblad: LindbladConfig

    def __post_init__(self):
        if self.target not in ("cavity", "qubit"):
            raise ValueError(f"drive target must be cavity or qubit, got {self.target!r}")
        if self.omega_d <= 0:
            raise ValueError("drive frequency must be positive")
        if self.intensity < 0:
            raise ValueError("drive intensity must be >= 0")


@dataclass
class OutputRecord:
    """Raw steady-state output observables (t_value only when D is known).

    n_photons and the bare moments m2 = <a^dag2 a^2>, m3 = <a^dag3 a^3> are
    kept so convergence checks can tell physical values from solver noise.
    """

    n_out: float
    t_raw: float
    g2: float | None
    g3: float | None
    t_value: float | None = None
    n_photons: float = 0.0
    m2: float = 0.0
    m3: float = 0.0


@dataclass
class TransmissionPoint:
    omega_d: float
    intensity: float
    t_value: float | None
    g2: float | None
    g3: float | None
    n_out: float | None
    converged: bool


def rotating_frame_hamiltonian(spec: ModelSpec, drive: DriveConfig,
                               space: HilbertSpace) -> OperatorMatrix:
    """Static Hamiltonian in the drive rotating frame.

    Frame generators: cavity drive uses G = omega_d (a^dag a + sigma_z) for the
    two-photon model and G = omega_d (a^dag a + sigma_z / 2) for the one-photon
    model; qubit drive on the two-photon model uses
    G = (omega_d/2)(a^dag a) + (omega_d/2) sigma_z. In every case the coupling
    term is left static and the drive becomes (D/2)(s + s^dag).
    """
    if spec.variant not in ("jc", "two_photon_jc"):
        raise UnsupportedVariantError(
            f"no static rotating frame for variant {spec.variant!r}")
    if abs(spec.coupling) > SC_COUPLING_GUARD * spec.omega_c:
        raise ModelConfigError(
            f"coupling {spec.coupling} outside the strong-coupling guard "
            f"(<= {SC_COUPLING_GUARD} omega_c)")
    if space.n_qubits != 1:
        raise ModelConfigError("rotating frames are built for single-qubit models")
    wc, wq, wd = spec.omega_c, spec.resolved_omega_q, drive.omega_d
    a = annihilation(space)
    ad = a.dag()
    n_op = number_operator(space)
    sz = pauli(space, "z", 0)
    sp_, sm_ = pauli(space, "plus", 0), pauli(space, "minus", 0)

    if spec.variant == "two_photon_jc":
        coupling = spec.g2 * (sp_ @ (a @ a) + sm_ @ (ad @ ad))
        if drive.target == "cavity":
            h = (wc - wd) * n_op + (0.5 * wq - wd) * sz + coupling
        else:
            h = (wc - 0.5 * wd) * n_op + 0.5 * (wq - wd) * sz + coupling
    else:
        coupling = spec.g * (sp_ @ a + sm_ @ ad)
        h = (wc - wd) * n_op + 0.5 * (wq - wd) * sz + coupling

    s = a if drive.target == "cavity" else sm_
    return h + 0.5 * drive.intensity * (s + s.dag())


def _moment(rho: np.ndarray, op: np.ndarray) -> float:
    """Real part of a PSD-operator mean, with tiny negative noise floored."""
    val = float(np.trace(op @ rho).real)
    if val < 0:
        scale = max(np.abs(rho).max() * np.abs(op).max(), 1.0)
        if val > -1e-10 * scale:
            return 0.0
    return val


def output_observables(rho_ss: DensityMatrix, gamma: float,
                       intensity: float | None = None) -> OutputRecord:
    """n_out, transmission and normalized correlations of the output field.

    When the intracavity photon number is below 1e-14 the correlations are
    reported as absent instead of returning noise ratios.
    """
    space = rho_ss.space
    a = annihilation(space).entries
    ad = a.conj().T
    rho = np.asarray(rho_ss.entries)
    n1 = _moment(rho, ad @ a)
    n_out = gamma * n1
    t_raw = gamma**2 * n1
    m2 = m3 = 0.0
    if n1 < CORRELATION_FLOOR:
        g2 = g3 = None
    else:
        m2 = _moment(rho, ad @ ad @ a @ a)
        m3 = _moment(rho, ad @ ad @ ad @ a @ a @ a)
        if m2 < 0 or m3 < 0:
            raise ValueError(
                "negative correlation moment beyond the numerical floor; "
                "the steady-state solve did not resolve this observable")
        g2 = m2 / n1**2
        g3 = m3 / n1**3
    t_value = None if intensity is None else (
        t_raw / intensity**2 if intensity > 0 else None)
    return OutputRecord(n_out=n_out, t_raw=t_raw, g2=g2, g3=g3, t_value=t_value,
                        n_photons=n1, m2=m2, m3=m3)


def steady_point_record(spec: ModelSpec, drive: DriveConfig,
                        cutoff: int) -> OutputRecord:
    """Steady-state output record for one (omega_d, D) point at a given cutoff."""
    space = HilbertSpace(1, cutoff)
    h = rotating_frame_hamiltonian(spec, drive, space)
    lv = build_liouvillian(h, drive.lindblad)
    rho = steady_state(lv)
    return output_observables(rho, drive.lindblad.gamma, drive.intensity)


def _converged_point(spec: ModelSpec, drive: DriveConfig, cutoff: int,
                     check_convergence: bool) -> TransmissionPoint:
    try:
        rec = steady_point_record(spec, drive, cutoff)
    except NonUniqueSteadyStateError:
        return TransmissionPoint(drive.omega_d, drive.intensity, None, None,
                                 None, None, converged=False)
    conv = True
    if check_convergence:
        bigger = math.ceil(1.25 * cutoff)
        rec_hi = steady_point_record(spec, drive, bigger)
        conv = records_converged(rec, rec_hi)
    return TransmissionPoint(drive.omega_d, drive.intensity, rec.t_value,
                             rec.g2, rec.g3, rec.n_out, converged=conv)


def records_converged(lo: OutputRecord, hi: OutputRecord,
                      tol: float = STEADY_CONVERGENCE_TOL) -> bool:
    """Relative agreement of two output records at different cutoffs.

    Correlation ratios are compared only when their moments are above the
    solver resolution at both cutoffs; below that the ratio is noise and says
    nothing about truncation.
    """
    for name in ("n_out", "t_value"):
        a, b = getattr(lo, name), getattr(hi, name)
        if a is None or b is None:
            continue
        if abs(a - b) / max(abs(b), 1e-18) >= tol:
            return False
    for ratio, moment in (("g2", "m2"), ("g3", "m3")):
        a, b = getattr(lo, ratio), getattr(hi, ratio)
        if a is None or b is None:
            continue
        if min(getattr(lo, moment), getattr(hi, moment)) <= MOMENT_RESOLUTION:
            continue
        if abs(a - b) / max(abs(b), 1e-18) >= tol:
            return False
    return True


def transmission_scan(spec: ModelSpec, drive_template: DriveConfig,
                      omega_d_grid, cutoff: int = 20,
                      check_convergence: bool = True,
                      workers: int = 1) -> list[TransmissionPoint]:
    """Steady-state observables versus drive frequency (ascending grid)."""
    grid = np.asarray(omega_d_grid, dtype=float)
    if grid.size == 0 or np.any(np.diff(grid) < 0):
        raise ValueError("omega_d grid must be nonempty and ascending")

    def one(wd: float) -> TransmissionPoint:
        return _converged_point(spec, replace(drive_template, omega_d=float(wd)),
                                cutoff, check_convergence)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, grid))
    return [one(wd) for wd in grid]


def blockade_scan(spec: ModelSpec, drive_template: DriveConfig,
                  intensity_grid, cutoff: int = 20,
                  check_convergence: bool = True,
                  workers: int = 1) -> list[TransmissionPoint]:
    """Correlations versus drive intensity at fixed drive frequency."""
    grid = np.asarray(intensity_grid, dtype=float)
    if grid.size == 0 or np.any(np.diff(grid) < 0):
        raise ValueError("intensity grid must be nonempty and ascending")

    def one(dv: float) -> TransmissionPoint:
        return _converged_point(spec, replace(drive_template, intensity=float(dv)),
                                cutoff, check_convergence)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, grid))
    return [one(dv) for dv in grid]


def blockade_windows(points: list[TransmissionPoint],
                     n_out_ceiling: float | None = None,
                     gamma: float | None = None) -> list[tuple[float, float]]:
    """Contiguous intensity intervals with g2 >= 1 and g3 < 1.

    With n_out_ceiling set (in units of gamma), points must additionally have
    n_out / gamma below the ceiling.
    """
    if n_out_ceiling is not None and gamma is None:
        raise ValueError("n_out ceiling needs the gamma it is measured against")
    windows: list[tuple[float, float]] = []
    start = None
    for pt in points:
        ok = (pt.g2 is not None and pt.g3 is not None
              and pt.g2 >= 1.0 and pt.g3 < 1.0)
        if ok and n_out_ceiling is not None:
            ok = pt.n_out is not None and pt.n_out / gamma < n_out_ceiling
        if ok and start is None:
            start = pt.intensity
        elif not ok and start is not None:
            windows.append((start, prev))
            start = None
        prev = pt.intensity
    if start is not None:
        windows.append((start, prev))
    return windows


def find_transmission_peaks(points: list[TransmissionPoint]
                            ) -> list[tuple[float, float]]:
    """Local maxima of T over the scan, refined by parabolic interpolation.

    Returns (omega_d, T) pairs sorted by descending height. Endpoints are not
    treated as peaks.
    """
    xs = np.array([p.omega_d for p in points])
    ts = np.array([np.nan if p.t_value is None else p.t_value for p in points])
    peaks = []
    for i in range(1, len(points) - 1):
        t0, t1, t2 = ts[i - 1], ts[i], ts[i + 1]
        if np.isnan(t0) or np.isnan(t1) or np.isnan(t2):
            continue
        if t1 >= t0 and t1 >= t2 and (t1 > t0 or t1 > t2):
            denom = t0 - 2.0 * t1 + t2
            if denom < 0:
                shift = 0.5 * (t0 - t2) / denom
                x_peak = xs[i] + shift * (xs[i + 1] - xs[i])
                t_peak = t1 - 0.25 * (t0 - t2) * shift
            else:
                x_peak, t_peak = xs[i], t1
            peaks.append((float(x_peak), float(t_peak)))
    peaks.sort(key=lambda p: -p[1])
    return peaks


def write_transmission_csv(points: list[TransmissionPoint], path) -> None:
    """Fixed-schema CSV; absent correlations serialize as empty fields."""

    def fmt(v):
        return "" if v is None else f"{v:.17g}"

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["omega_d", "D", "T", "g2", "g3", "n_out", "converged"])
        for p in points:
            writer.writerow([
                f"{p.omega_d:.17g}", f"{p.intensity:.17g}", fmt(p.t_value),
                fmt(p.g2), fmt(p.g3), fmt(p.n_out),
                str(bool(p.converged)).lower(),
            ])
