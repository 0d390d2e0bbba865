"""Hamiltonian builders for one- and two-photon qubit-cavity models.

Variants cover the exact models (Jaynes-Cummings, quantum Rabi, their
two-photon counterparts with full-quadratic or pure pair coupling, and the
multiqubit two-photon model with optional inter-spin and quartic terms) and
the perturbative effective Hamiltonians (Bloch-Siegert and dispersive).

Frequency units: omega_c = 1 is the natural reference; all couplings and
rates are quoted in units of omega_c throughout the test-suite.

Conventions kept exactly as used by the builders:

* single-qubit variants put the qubit splitting on sigma_z and couple through
  sigma_x (or sigma_pm after the rotating-wave reduction);
* the multiqubit variant puts both the spin splitting and the coupling on
  sigma_x, so every spin operator commutes with the Hamiltonian;
* :func:`qubit_basis_rotation` returns the Hadamard-type rotation that
  exchanges the two conventions (sigma_x <-> sigma_z).

Effective variants drop state-independent constants, so only level
differences are meaningful for them.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .fock import (
    HilbertSpace,
    OperatorMatrix,
    annihilation,
    identity,
    number_operator,
    pauli,
    photon_parity,
)


class ModelConfigError(ValueError):
    """Variant and parameter combination that cannot be built."""


class SingularDetuningError(ZeroDivisionError):
    """A dispersive shift was requested at vanishing detuning."""


ONE_PHOTON_VARIANTS = ("jc", "qrm", "bs_effective", "dispersive_jc")
TWO_PHOTON_VARIANTS = (
    "two_photon_jc",
    "two_photon_qrm_full",
    "two_photon_qrm_pure",
    "multiqubit_two_photon",
    "two_photon_bs_effective",
    "dispersive_two_photon_rwa",
    "dispersive_two_photon_full",
)
EFFECTIVE_VARIANTS = (
    "bs_effective",
    "two_photon_bs_effective",
    "dispersive_two_photon_rwa",
    "dispersive_two_photon_full",
    "dispersive_jc",
)
VARIANTS = tuple(v for v in ONE_PHOTON_VARIANTS if v not in EFFECTIVE_VARIANTS) + tuple(
    v for v in TWO_PHOTON_VARIANTS if v not in EFFECTIVE_VARIANTS
) + EFFECTIVE_VARIANTS

# Variants that conserve photon-number parity exactly.
PARITY_CONSERVING_VARIANTS = TWO_PHOTON_VARIANTS


@dataclass(frozen=True)
class ModelSpec:
    """Declarative description of which Hamiltonian to build.

    omega_q defaults to the resonant value of the variant family
    (2 omega_c for two-photon couplings, omega_c for one-photon ones).
    Parameters not read by the chosen variant must stay zero.
    """

    variant: str
    omega_c: float = 1.0
    omega_q: float | None = None
    g: float = 0.0
    g2: float = 0.0
    g4: float = 0.0
    j_spin: float = 0.0
    n_qubits: int = 1

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ModelConfigError(f"unknown variant {self.variant!r}")
        if self.omega_c < 0 or (self.omega_q is not None and self.omega_q < 0):
            raise ModelConfigError("frequencies must be nonnegative")
        for name in ("g", "g2", "g4", "j_spin"):
            if np.imag(getattr(self, name)) != 0:
                raise ModelConfigError(f"coupling {name} must be real")
        if self.n_qubits < 1:
            raise ModelConfigError("n_qubits must be >= 1")
        if self.variant != "multiqubit_two_photon":
            if self.n_qubits != 1:
                raise ModelConfigError(
                    f"variant {self.variant!r} is single-qubit, got n_qubits={self.n_qubits}"
                )
            for name in ("g4", "j_spin"):
                if getattr(self, name) != 0.0:
                    raise ModelConfigError(
                        f"parameter {name} is only read by multiqubit_two_photon"
                    )
        used = "g" if self.variant in ONE_PHOTON_VARIANTS else "g2"
        unused = "g2" if used == "g" else "g"
        if getattr(self, unused) != 0.0:
            raise ModelConfigError(
                f"variant {self.variant!r} reads {used}, but {unused} is nonzero"
            )

    @property
    def resolved_omega_q(self) -> float:
        if self.omega_q is not None:
            return self.omega_q
        if self.variant in ONE_PHOTON_VARIANTS:
            return self.omega_c
        return 2.0 * self.omega_c

    def with_coupling(self, value: float) -> "ModelSpec":
        """Copy of this spec with the variant's coupling (g or g2) replaced."""
        if self.variant in ONE_PHOTON_VARIANTS:
            return replace(self, g=value)
        return replace(self, g2=value)

    @property
    def coupling(self) -> float:
        return self.g if self.variant in ONE_PHOTON_VARIANTS else self.g2


class ShiftSet:
    """Perturbative frequency shifts, evaluated lazily.

    Each property raises :class:`SingularDetuningError` if its denominator
    vanishes for the spec's frequencies. Sign conventions are fixed so that
    second-order perturbation theory on the bare levels is reproduced: the
    dispersive shifts carry the qubit-minus-field detuning in the denominator
    (chi = 2 g2^2/(omega_q - 2 omega_c), chi_1 = g^2/(omega_q - omega_c)),
    while zeta keeps g^4/(omega_c - omega_q)^3.
    """

    def __init__(self, spec: ModelSpec):
        self._wc = spec.omega_c
        self._wq = spec.resolved_omega_q
        self._g = spec.g
        self._g2 = spec.g2

    def _ratio(self, numerator: float, denom: float, name: str) -> float:
        if numerator == 0.0:
            return 0.0  # the shift vanishes identically with the coupling
        if denom == 0.0:
            raise SingularDetuningError(f"shift {name} has vanishing denominator")
        return numerator / denom

    @property
    def omega_2bs(self) -> float:
        return self._ratio(2.0 * self._g2**2, 2.0 * self._wc + self._wq, "omega_2bs")

    @property
    def omega_q_shift(self) -> float:
        return self._ratio(2.0 * self._g2**2, self._wq, "omega_q_shift")

    @property
    def chi(self) -> float:
        return self._ratio(2.0 * self._g2**2, self._wq - 2.0 * self._wc, "chi")

    @property
    def chi_1(self) -> float:
        return self._ratio(self._g**2, self._wq - self._wc, "chi_1")

    @property
    def zeta(self) -> float:
        return self._ratio(self._g**4, (self._wc - self._wq) ** 3, "zeta")

    @property
    def omega_bs(self) -> float:
        return self._ratio(self._g**2, self._wc + self._wq, "omega_bs")


def analytic_shifts(spec: ModelSpec) -> ShiftSet:
    return ShiftSet(spec)


@dataclass(frozen=True)
class DoubletEnergies:
    """Closed-form doublet energies of the resonant two-photon RWA model.

    Energies are measured from the ground state, assuming omega_q = 2 omega_c:
    E_n_pm = omega_c (n+2) +- g2 sqrt((n+1)(n+2)), and the neighbouring-doublet
    gaps delta_n_pm = E_n_pm - E_{n-1}_pm.
    """

    e_plus: float
    e_minus: float
    delta_plus: float
    delta_minus: float


def analytic_doublet_energies(spec: ModelSpec, n: int) -> DoubletEnergies:
    if n < 0:
        raise ModelConfigError("doublet index n must be >= 0")
    wc, g2 = spec.omega_c, spec.g2
    split = g2 * np.sqrt((n + 1.0) * (n + 2.0))
    step = g2 * (np.sqrt((n + 1.0) * (n + 2.0)) - np.sqrt(n * (n + 1.0)))
    return DoubletEnergies(
        e_plus=wc * (n + 2.0) + split,
        e_minus=wc * (n + 2.0) - split,
        delta_plus=wc + step,
        delta_minus=wc - step,
    )


def _check_space(spec: ModelSpec, space: HilbertSpace):
    if space.n_qubits != spec.n_qubits:
        raise ModelConfigError(
            f"variant {spec.variant!r} needs n_qubits={spec.n_qubits}, "
            f"space has {space.n_qubits}"
        )
    if space.fock_cutoff < 2:
        raise ModelConfigError("model builders need fock_cutoff >= 2")


def build_hamiltonian(spec: ModelSpec, space: HilbertSpace) -> OperatorMatrix:
    """Hermitian Hamiltonian of the requested variant on the given space."""
    if spec.variant in EFFECTIVE_VARIANTS:
        return build_effective_hamiltonian(spec, space)
    _check_space(spec, space)
    wc, wq = spec.omega_c, spec.resolved_omega_q
    a = annihilation(space)
    ad = a.dag()
    n_op = number_operator(space)
    one = identity(space)

    if spec.variant == "multiqubit_two_photon":
        x_quad = (a + ad) @ (a + ad)
        sx_sum = pauli(space, "x", 0)
        for i in range(1, space.n_qubits):
            sx_sum = sx_sum + pauli(space, "x", i)
        h = wc * n_op + spec.g2 * (sx_sum @ x_quad) + 0.5 * wq * sx_sum
        if spec.j_spin != 0.0:
            for i in range(space.n_qubits - 1):
                h = h + spec.j_spin * (pauli(space, "x", i) @ pauli(space, "x", i + 1))
        if spec.g4 != 0.0:
            h = h + spec.g4 * (sx_sum @ (x_quad @ x_quad))
        return h

    sz = pauli(space, "z", 0)
    if spec.variant == "jc":
        sp, sm = pauli(space, "plus", 0), pauli(space, "minus", 0)
        return wc * n_op + 0.5 * wq * sz + spec.g * (sp @ a + sm @ ad)
    if spec.variant == "qrm":
        sx = pauli(space, "x", 0)
        return wc * n_op + 0.5 * wq * sz + spec.g * (sx @ (a + ad))
    if spec.variant == "two_photon_jc":
        sp, sm = pauli(space, "plus", 0), pauli(space, "minus", 0)
        return wc * n_op + 0.5 * wq * sz + spec.g2 * (sp @ (a @ a) + sm @ (ad @ ad))

    sx = pauli(space, "x", 0)
    if spec.variant == "two_photon_qrm_full":
        coup = (a + ad) @ (a + ad)
    else:  # two_photon_qrm_pure
        coup = a @ a + ad @ ad
    return wc * (n_op + 0.5 * one) + 0.5 * wq * sz + spec.g2 * (sx @ coup)


def build_effective_hamiltonian(spec: ModelSpec, space: HilbertSpace) -> OperatorMatrix:
    """Perturbative Bloch-Siegert / dispersive Hamiltonian of the variant.

    Identity-proportional constants are dropped, so compare level differences
    against the exact models, never absolute energies.
    """
    if spec.variant not in EFFECTIVE_VARIANTS:
        raise ModelConfigError(f"{spec.variant!r} is not an effective variant")
    _check_space(spec, space)
    wc, wq = spec.omega_c, spec.resolved_omega_q
    if spec.variant.startswith("dispersive_two_photon") and wq == 2.0 * wc:
        raise SingularDetuningError(
            "dispersive two-photon variants need omega_q != 2 omega_c")
    if spec.variant == "dispersive_jc" and wq == wc:
        raise SingularDetuningError("dispersive_jc needs omega_q != omega_c")
    shifts = analytic_shifts(spec)
    n_op = number_operator(space)
    sz = pauli(space, "z", 0)
    one = identity(space)
    n_plus_n2 = n_op + n_op @ n_op

    if spec.variant == "bs_effective":
        base = replace(spec, variant="jc")
        wbs = shifts.omega_bs
        return build_hamiltonian(base, space) + 0.5 * wbs * sz + wbs * (sz @ n_op)

    if spec.variant == "two_photon_bs_effective":
        base = replace(spec, variant="two_photon_jc")
        w2bs, oqs = shifts.omega_2bs, shifts.omega_q_shift
        return (
            build_hamiltonian(base, space)
            - w2bs * n_op
            + 0.5 * (w2bs + oqs) * sz
            + (0.5 * w2bs + 2.0 * oqs) * (sz @ n_plus_n2)
        )

    if spec.variant == "dispersive_two_photon_rwa":
        chi = shifts.chi
        return (wc + chi) * n_op + 0.5 * (wq + chi) * sz + 0.5 * chi * (sz @ n_plus_n2)

    if spec.variant == "dispersive_two_photon_full":
        chi, w2bs, oqs = shifts.chi, shifts.omega_2bs, shifts.omega_q_shift
        return (
            (wc - w2bs + chi) * n_op
            + 0.5 * (wq + w2bs + oqs + chi) * sz
            + (0.5 * w2bs + 2.0 * oqs + 0.5 * chi) * (sz @ n_plus_n2)
        )

    # dispersive_jc
    chi1, zeta = shifts.chi_1, shifts.zeta
    return (
        (wc + zeta) * n_op
        + 0.5 * (wq + chi1) * sz
        + chi1 * (sz @ n_op)
        + zeta * (sz @ (n_op @ n_op))
    )


def parity_operator(spec_or_variant, space: HilbertSpace) -> OperatorMatrix:
    """Discrete parity conserved by the variant.

    Two-photon couplings conserve the photon-number parity exp(i pi a^dag a);
    one-photon couplings conserve the joint parity sigma_z exp(i pi a^dag a).
    """
    variant = getattr(spec_or_variant, "variant", spec_or_variant)
    if variant in TWO_PHOTON_VARIANTS:
        return photon_parity(space)
    if variant in ONE_PHOTON_VARIANTS:
        if space.n_qubits != 1:
            raise ModelConfigError("one-photon parity defined for a single qubit")
        return pauli(space, "z", 0) @ photon_parity(space)
    raise ModelConfigError(f"unknown variant {variant!r}")


def conserved_charge(spec_or_variant, space: HilbertSpace) -> OperatorMatrix:
    """Continuous charge conserved by the RWA variants.

    The one-photon coupling sigma_+ a exchanges one photon per spin flip and
    conserves 2 a^dag a + sigma_z; the two-photon coupling sigma_+ a^2
    exchanges a photon pair per spin flip and conserves a^dag a + sigma_z.
    (These two operators are often quoted with their roles interchanged; the
    commutator tests pin the assignment used here.)
    """
    variant = getattr(spec_or_variant, "variant", spec_or_variant)
    n_op = number_operator(space)
    sz = pauli(space, "z", 0)
    if variant in ("jc", "bs_effective", "dispersive_jc"):
        return 2.0 * n_op + sz
    if variant in ("two_photon_jc", "two_photon_bs_effective",
                   "dispersive_two_photon_rwa", "dispersive_two_photon_full"):
        return n_op + sz
    raise ModelConfigError(f"variant {variant!r} has no conserved charge")


def qubit_basis_rotation(space: HilbertSpace) -> OperatorMatrix:
    """Hadamard rotation on every qubit; conjugation swaps sigma_x and sigma_z."""
    had = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)
    mats = [had] * space.n_qubits + [np.eye(space.boson_dim, dtype=complex)]
    from functools import reduce

    return OperatorMatrix(space, reduce(np.kron, mats))
