import numpy as np
import pytest

from tprabi.fock import (
    HilbertSpace,
    InvalidSpaceError,
    QubitIndexError,
    ShapeMismatchError,
    annihilation,
    creation,
    fock_state,
    identity,
    number_operator,
    pauli,
    photon_parity,
    tensor,
)


def test_space_dimensions():
    sp = HilbertSpace(n_qubits=2, fock_cutoff=5)
    assert sp.boson_dim == 6
    assert sp.total_dim == 2**2 * 6
    assert HilbertSpace(0, 3).total_dim == 4


def test_space_validation():
    with pytest.raises(InvalidSpaceError):
        HilbertSpace(-1, 3)
    with pytest.raises(InvalidSpaceError):
        HilbertSpace(1, -1)


def test_annihilation_matrix_elements():
    sp = HilbertSpace(0, 6)
    a = annihilation(sp).entries
    assert a[0, 1] == pytest.approx(1.0)          # <0|a|1> = sqrt(1)
    assert a[3, 4] == pytest.approx(2.0)          # <3|a|4> = sqrt(4)
    vac = fock_state(sp, 0)
    assert np.linalg.norm(a @ vac) == 0.0


def test_annihilation_needs_nonzero_cutoff():
    with pytest.raises(InvalidSpaceError):
        annihilation(HilbertSpace(1, 0))


def test_creation_is_conjugate_transpose():
    sp = HilbertSpace(1, 9)
    a = annihilation(sp)
    assert np.array_equal(creation(sp).entries, a.entries.conj().T)


def test_commutator_on_retained_levels():
    # [a, a^dag] = 1 except on the top Fock level (truncation artifact)
    sp = HilbertSpace(0, 8)
    a = annihilation(sp).entries
    comm = a @ a.conj().T - a.conj().T @ a
    assert np.allclose(np.diag(comm)[:-1], 1.0, atol=1e-14)
    assert np.diag(comm)[-1] == pytest.approx(-sp.fock_cutoff)


def test_number_operator_spectrum_exact():
    sp = HilbertSpace(1, 7)
    n = number_operator(sp).entries
    vals = np.sort(np.linalg.eigvalsh(n))
    expected = np.sort(np.tile(np.arange(8), 2).astype(float))
    assert np.array_equal(vals.round(12), expected)


def test_pauli_z_layout():
    sp = HilbertSpace(1, 2)
    sz = pauli(sp, "z", 0).entries
    expected = np.kron(np.diag([1.0, -1.0]), np.eye(3))
    assert np.array_equal(sz, expected)


def test_pauli_algebra():
    sp = HilbertSpace(2, 3)
    for idx in (0, 1):
        sp_p = pauli(sp, "plus", idx)
        sp_m = pauli(sp, "minus", idx)
        ident = identity(sp).entries
        assert np.allclose((sp_p @ sp_m + sp_m @ sp_p).entries, ident)
        sx = pauli(sp, "x", idx)
        assert np.allclose((sx @ sx).entries, ident)
        # sigma_pm = (sigma_x +- i sigma_y)/2
        sy = pauli(sp, "y", idx)
        assert np.allclose(sp_p.entries, 0.5 * (sx.entries + 1j * sy.entries))


def test_pauli_index_out_of_range():
    sp = HilbertSpace(1, 2)
    with pytest.raises(QubitIndexError):
        pauli(sp, "x", 1)
    with pytest.raises(QubitIndexError):
        pauli(HilbertSpace(0, 2), "z", 0)


def test_photon_parity_action():
    sp = HilbertSpace(0, 5)
    par = photon_parity(sp).entries
    assert par @ fock_state(sp, 0) @ fock_state(sp, 0) == pytest.approx(1.0)
    v3 = fock_state(sp, 3)
    assert v3 @ (par @ v3) == pytest.approx(-1.0)
    assert np.array_equal(par @ par, np.eye(sp.total_dim))


def test_parity_anticommutes_with_annihilation_exactly():
    sp = HilbertSpace(1, 11)
    a = annihilation(sp).entries
    par = photon_parity(sp).entries
    assert np.array_equal(par @ a @ par, -a)


def test_tensor_identities():
    out = tensor([np.eye(2), np.eye(3)])
    assert np.array_equal(out.entries, np.eye(6))
    assert out.space == HilbertSpace(1, 2)


def test_tensor_mixed_product_property():
    rng = np.random.default_rng(3)
    for _ in range(5):
        a_f, c_f = rng.standard_normal((2, 2, 2)) + 1j * rng.standard_normal((2, 2, 2))
        b_f, d_f = rng.standard_normal((2, 3, 3)) + 1j * rng.standard_normal((2, 3, 3))
        left = tensor([a_f, b_f]) @ tensor([c_f, d_f])
        right = tensor([a_f @ c_f, b_f @ d_f])
        assert np.allclose(left.entries, right.entries, atol=1e-13)


def test_tensor_dimension_for_cutoff_five():
    sz = np.diag([1.0, -1.0])
    a = np.diag(np.sqrt(np.arange(1, 6)), 1)
    assert tensor([sz, a]).space.total_dim == 12


def test_tensor_shape_errors():
    with pytest.raises(ShapeMismatchError):
        tensor([np.eye(3), np.eye(3)])  # leading factor must be a qubit
    with pytest.raises(ShapeMismatchError):
        tensor([np.eye(2), np.eye(3)], space=HilbertSpace(1, 3))


def test_operator_matrix_immutability_and_algebra():
    sp = HilbertSpace(1, 2)
    op = identity(sp)
    with pytest.raises(ValueError):
        op.entries[0, 0] = 2.0
    combo = 2.0 * op - op
    assert np.allclose(combo.entries, np.eye(sp.total_dim))
    with pytest.raises(ShapeMismatchError):
        op @ identity(HilbertSpace(1, 3))
