import csv

import numpy as np
import pytest

from tprabi.fock import HilbertSpace, OperatorMatrix
from tprabi.models import ModelConfigError, ModelSpec, build_hamiltonian
from tprabi.spectra import (
    CollapseEstimate,
    HermiticityError,
    IntervalError,
    coupling_scan,
    cutoff_convergence,
    detect_collapse,
    eigenspectrum,
    write_spectrum_csv,
)


def diag_op(values):
    d = len(values)
    return OperatorMatrix(HilbertSpace(0, d - 1), np.diag(values).astype(complex))


def test_eigenspectrum_sorts_ascending():
    vals = eigenspectrum(diag_op([3.0, 1.0, 2.0]), 3)
    assert np.allclose(vals, [1.0, 2.0, 3.0])


def test_eigenspectrum_rejects_non_hermitian():
    mat = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(HermiticityError):
        eigenspectrum(OperatorMatrix(HilbertSpace(0, 1), mat), 1)


def test_eigenvectors_orthonormal():
    spec = ModelSpec("two_photon_jc", g2=0.01, omega_q=2.0)
    h = build_hamiltonian(spec, HilbertSpace(1, 20))
    vals, vecs = eigenspectrum(h, 8, want_vectors=True)
    gram = vecs.conj().T @ vecs
    assert np.abs(gram - np.eye(8)).max() < 1e-10


def _char_poly_coeffs(mat):
    # Faddeev-LeVerrier recursion: coefficients from traces of powers only,
    # independent of any eigenvalue routine.
    n = mat.shape[0]
    coeffs = [1.0 + 0j]
    m = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        m = mat @ m
        c = -np.trace(m) / k
        coeffs.append(c)
        m = m + c * np.eye(n, dtype=complex)
    return np.array(coeffs)


def test_eigenvalues_match_characteristic_polynomial_roots():
    rng = np.random.default_rng(11)
    raw = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    herm = 0.5 * (raw + raw.conj().T)
    op = OperatorMatrix(HilbertSpace(0, 7), herm)
    vals = eigenspectrum(op, 8)
    roots = np.sort(np.roots(_char_poly_coeffs(herm)).real)
    assert np.abs(vals - roots).max() < 1e-8


def test_doublet_levels_via_eigenspectrum():
    spec = ModelSpec("two_photon_jc", g2=0.01, omega_q=2.0)
    vals = eigenspectrum(build_hamiltonian(spec, HilbertSpace(1, 30)), 4)
    rel = vals - vals[0]
    expected = [0.0, 1.0, 2.0 - np.sqrt(2) * 0.01, 2.0 + np.sqrt(2) * 0.01]
    assert np.allclose(rel, expected, atol=1e-10)


def test_coupling_scan_zero_coupling_ladder():
    spec = ModelSpec("two_photon_jc", g2=0.0, omega_q=2.0)
    scan = coupling_scan(spec, [0.0], k=6, cutoff=20)
    rel = scan.levels[0] - scan.levels[0][0]
    assert np.allclose(rel, [0.0, 1.0, 2.0, 2.0, 3.0, 3.0], atol=1e-12)
    assert scan.converged[0]
    assert scan.parameter_name == "g2"


def test_coupling_scan_parity_labels_are_physical():
    spec = ModelSpec("two_photon_qrm_full", g2=0.0, omega_q=2.0)
    scan = coupling_scan(spec, [0.01, 0.05, 0.1], k=8, cutoff=60)
    assert np.all(np.abs(np.abs(scan.parities) - 1.0) < 1e-8)
    # rows stay ascending (parity tie-breaking only reorders exact degeneracies)
    assert np.all(np.diff(scan.levels, axis=1) >= -1e-9)


def test_coupling_scan_one_photon_ground_matches_perturbation():
    # weak-coupling ground shift of the resonant one-photon QRM is
    # -g^2/(omega_c + omega_q) from the counter-rotating term
    spec = ModelSpec("qrm", g=0.0, omega_q=1.0)
    gs = np.array([0.002, 0.004, 0.008])
    scan = coupling_scan(spec, gs, k=1, cutoff=30)
    shift = scan.levels[:, 0] - (-0.5)
    expected = -gs**2 / 2.0
    assert np.allclose(shift, expected, rtol=5e-3, atol=1e-9)
    assert scan.parameter_name == "g"


def test_coupling_scan_workers_deterministic():
    spec = ModelSpec("two_photon_jc", g2=0.0, omega_q=2.0)
    grid = [0.0, 0.005, 0.01, 0.02]
    serial = coupling_scan(spec, grid, k=4, cutoff=24, workers=1)
    parallel = coupling_scan(spec, grid, k=4, cutoff=24, workers=4)
    assert np.array_equal(serial.levels, parallel.levels)
    assert np.array_equal(serial.parities, parallel.parities)


def test_cutoff_convergence_zero_coupling():
    spec = ModelSpec("two_photon_jc", g2=0.0, omega_q=2.0)
    rep = cutoff_convergence(spec, "levels", cutoff=12, k=6)
    assert rep.converged and rep.relative_change < 1e-12


def test_cutoff_convergence_ladder_near_collapse():
    # g2 = 0.24 is close under the N=1 collapse point: the 10 lowest levels
    # need a cutoff around a hundred
    spec = ModelSpec("two_photon_qrm_full", g2=0.24, omega_q=2.0)
    assert not cutoff_convergence(spec, "levels", cutoff=40, k=10).converged
    assert not cutoff_convergence(spec, "levels", cutoff=80, k=10).converged
    assert cutoff_convergence(spec, "levels", cutoff=160, k=10).converged


def test_steady_observable_convergence_ladder():
    # a resonantly driven bare cavity at D = 3 gamma holds 9 photons: low
    # cutoffs truncate the coherent tail, cutoff 30 resolves it
    from tprabi.liouville import LindbladConfig
    from tprabi.scattering import DriveConfig

    spec = ModelSpec("jc", g=0.0)
    drive = DriveConfig("cavity", omega_d=1.0, intensity=3e-3,
                        lindblad=LindbladConfig(gamma=1e-3, gamma_q=1e-3))
    low = cutoff_convergence(spec, "steady_observables", cutoff=12, drive=drive)
    high = cutoff_convergence(spec, "steady_observables", cutoff=30, drive=drive)
    assert not low.converged and low.relative_change > 0.01
    assert high.converged


def test_past_collapse_never_converges():
    spec = ModelSpec("two_photon_qrm_full", g2=0.26, omega_q=2.0)
    grounds = []
    for cutoff in (40, 80, 160):
        rep = cutoff_convergence(spec, "levels", cutoff=cutoff, k=1)
        assert not rep.converged
        grounds.append(eigenspectrum(
            build_hamiltonian(spec, HilbertSpace(1, cutoff)), 1)[0])
    assert grounds[2] < grounds[1] < grounds[0]


def test_variational_monotonicity_of_levels():
    # enlarging the basis can only lower truncated eigenvalues (within solver noise)
    spec = ModelSpec("two_photon_qrm_full", g2=0.2, omega_q=2.0)
    k = 6
    prev = None
    for cutoff in (30, 45, 68, 102):
        vals = eigenspectrum(build_hamiltonian(spec, HilbertSpace(1, cutoff)), k)
        if prev is not None:
            assert np.all(vals <= prev + 1e-9)
        prev = vals


def test_detect_collapse_single_qubit_full():
    spec = ModelSpec("two_photon_qrm_full", g2=0.0, omega_q=2.0)
    est = detect_collapse(spec, (0.2, 0.3), cutoff=150)
    assert isinstance(est, CollapseEstimate)
    assert abs(est.g_col - 0.25) / 0.25 < 0.01


def test_detect_collapse_single_qubit_pure():
    spec = ModelSpec("two_photon_qrm_pure", g2=0.0, omega_q=2.0)
    est = detect_collapse(spec, (0.4, 0.6), cutoff=150)
    assert abs(est.g_col - 0.5) / 0.5 < 0.01


def test_detect_collapse_scales_inversely_with_qubit_number():
    results = {}
    for n in (1, 2):
        spec = ModelSpec("multiqubit_two_photon", g2=0.0, n_qubits=n, omega_q=2.0)
        interval = (0.15 / n, 0.35 / n)
        results[n] = detect_collapse(spec, interval, cutoff=150).g_col
    for n, est in results.items():
        assert abs(est * 4 * n - 1.0) < 0.02


def test_detect_collapse_interval_errors():
    spec = ModelSpec("two_photon_qrm_full", g2=0.0, omega_q=2.0)
    with pytest.raises(IntervalError):
        detect_collapse(spec, (0.01, 0.02), cutoff=60)   # both stable
    with pytest.raises(IntervalError):
        detect_collapse(spec, (0.4, 0.5), cutoff=60)     # both unstable
    with pytest.raises(ModelConfigError):
        detect_collapse(ModelSpec("jc", g=0.01), (0.1, 0.9))


def test_interspin_coupling_shifts_spectrum_but_not_collapse():
    base = ModelSpec("multiqubit_two_photon", g2=0.02, n_qubits=3, omega_q=2.0)
    with_j = ModelSpec("multiqubit_two_photon", g2=0.02, n_qubits=3,
                       j_spin=0.2, omega_q=2.0)
    sp = HilbertSpace(3, 40)
    lv0 = eigenspectrum(build_hamiltonian(base, sp), 6)
    lvj = eigenspectrum(build_hamiltonian(with_j, sp), 6)
    assert np.abs((lv0 - lv0[0]) - (lvj - lvj[0])).max() > 1e-3
    est0 = detect_collapse(base.with_coupling(0.0), (0.06, 0.12), cutoff=120).g_col
    estj = detect_collapse(with_j.with_coupling(0.0), (0.06, 0.12), cutoff=120).g_col
    assert abs(est0 - estj) / est0 < 0.02


def test_spectrum_csv_roundtrip(tmp_path):
    spec = ModelSpec("two_photon_jc", g2=0.0, omega_q=2.0)
    scan = coupling_scan(spec, [0.0, 0.01], k=3, cutoff=16)
    path = tmp_path / "scan.csv"
    write_spectrum_csv(scan, path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["g2", "level_0", "level_1", "level_2",
                       "parity_0", "parity_1", "parity_2", "converged"]
    assert len(rows) == 3
    back = np.array([[float(v) for v in row[1:4]] for row in rows[1:]])
    assert np.array_equal(back, scan.levels)  # 17 significant digits roundtrip
    assert rows[1][-1] in ("true", "false")
