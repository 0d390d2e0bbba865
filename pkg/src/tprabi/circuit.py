"""SQUID / flux-qubit circuit parameters to effective model couplings.

A symmetric dc-SQUID (junction critical current I_C, total capacitance C_SQ)
is flux-biased by Phi_DC and optionally current-biased, which sets a static
phase varphi_DC. A flux qubit with persistent current I_p couples through the
mutual inductance M. The expansion of the SQUID potential around its minimum
yields the resonator frequency, a one-photon coupling that is switched on
only by the current bias, a flux-tunable two-photon coupling, and a quartic
correction whose sign opposes the two-photon term.

All functions take SI inputs and return SI outputs; unit conversion lives at
the CLI boundary. Note on the frequency formula: the resonance is
1/sqrt(L_J C_SQ) on dimensional grounds (an L-C mode), which is what
squid_frequency implements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from scipy.constants import e as ELEMENTARY_CHARGE, h as PLANCK_H, hbar as HBAR
from scipy.optimize import brentq

PHI0 = PLANCK_H / (2.0 * ELEMENTARY_CHARGE)  # magnetic flux quantum, Wb


class CircuitParameterError(ValueError):
    """Circuit parameters outside the validity domain of the mapping."""


@dataclass(frozen=True)
class CircuitParams:
    """Physical circuit parameters in SI units.

    i_c: junction critical current (A); c_sq: total SQUID capacitance (F);
    m: qubit-SQUID mutual inductance (H); i_p: qubit persistent current (A);
    flux_dc: static SQUID flux (Wb); phase_dc: static bias phase (rad);
    i_b: bias current (A).
    """

    i_c: float
    c_sq: float
    m: float = 0.0
    i_p: float = 0.0
    flux_dc: float = 0.0
    phase_dc: float = 0.0
    i_b: float = 0.0

    def __post_init__(self):
        if self.i_c <= 0:
            raise CircuitParameterError("critical current i_c must be > 0")
        if self.c_sq <= 0:
            raise CircuitParameterError("capacitance c_sq must be > 0")
        if abs(self.flux_dc / PHI0) >= 0.5:
            raise CircuitParameterError(
                "|flux_dc| must stay below Phi0/2 to keep the SQUID potential confining")

    @property
    def flux_frac(self) -> float:
        """flux_dc / Phi0."""
        return self.flux_dc / PHI0


def josephson_energy(p: CircuitParams) -> float:
    """Single-junction Josephson energy I_C Phi0 / (2 pi), in joules."""
    return p.i_c * PHI0 / (2.0 * math.pi)


def phase_from_bias(p: CircuitParams) -> float:
    """Static phase arcsin(I_B / (2 I_C cos(pi Phi_DC/Phi0))) set by the bias current."""
    ceiling = 2.0 * p.i_c * math.cos(math.pi * p.flux_frac)
    if abs(p.i_b) > ceiling:
        raise CircuitParameterError(
            f"bias current {p.i_b} exceeds the critical value {ceiling}")
    return math.asin(p.i_b / ceiling)


def josephson_inductance(p: CircuitParams) -> float:
    """L_J = Phi0 / (2 pi (2 I_C) cos(pi Phi_DC/Phi0) cos(varphi_DC)), in henry."""
    cos_flux = math.cos(math.pi * p.flux_frac)
    cos_phase = math.cos(p.phase_dc)
    if cos_flux * cos_phase <= 0:
        raise CircuitParameterError("Josephson inductance diverges at this bias point")
    return PHI0 / (2.0 * math.pi * (2.0 * p.i_c) * cos_flux * cos_phase)


def squid_frequency(p: CircuitParams) -> float:
    """SQUID plasma resonance 1/sqrt(L_J C_SQ), in rad/s."""
    return 1.0 / math.sqrt(josephson_inductance(p) * p.c_sq)


def two_photon_coupling(p: CircuitParams) -> float:
    """g2 = -(pi/4) tan(pi Phi_DC/Phi0) (M I_p / Phi0) omega_SQ, in rad/s.

    Valid at zero bias current only (the quoted form assumes varphi_DC = 0).
    The coupling vanishes at zero static flux and is odd in it.
    """
    if p.phase_dc != 0.0:
        raise CircuitParameterError(
            "two-photon coupling formula requires zero bias phase")
    return (-(math.pi / 4.0) * math.tan(math.pi * p.flux_frac)
            * (p.m * p.i_p / PHI0) * squid_frequency(p)) + 0.0


def one_photon_coupling(p: CircuitParams) -> float:
    """Dipolar coupling created by the bias current, in rad/s.

    Prefactor of (a + a^dag) sigma_z divided by hbar:
    g1 = -4 E_J (pi/Phi0)^2 sin(pi Phi_DC/Phi0) sin(varphi_DC)
         M I_p sqrt(hbar omega_SQ L_J / 2) / hbar.
    Vanishes when no current biases the SQUID.
    """
    ej = josephson_energy(p)
    w = squid_frequency(p)
    lj = josephson_inductance(p)
    return (-4.0 * ej * (math.pi / PHI0) ** 2
            * math.sin(math.pi * p.flux_frac) * math.sin(p.phase_dc)
            * p.m * p.i_p * math.sqrt(HBAR * w * lj / 2.0) / HBAR) + 0.0


def quartic_ratio(p: CircuitParams) -> float:
    """|U_4P| / |U_TPR| = (1/24) (pi/Phi0) hbar omega_SQ / (I_C cos(pi Phi_DC/Phi0)).

    Ratio of the quartic to the quadratic coupling prefactor; the quartic term
    itself carries the opposite sign to g2.
    """
    cos_flux = math.cos(math.pi * p.flux_frac)
    if cos_flux <= 0:
        raise CircuitParameterError("quartic ratio undefined past Phi0/2 flux bias")
    return (HBAR * squid_frequency(p) * math.pi
            / (24.0 * PHI0 * p.i_c * cos_flux * math.cos(p.phase_dc)))


def capacitance_for_frequency(p: CircuitParams, omega_target: float) -> float:
    """C_SQ that puts the SQUID resonance at omega_target (rad/s), same bias."""
    if omega_target <= 0:
        raise CircuitParameterError("target frequency must be positive")
    return 1.0 / (josephson_inductance(p) * omega_target**2)


def flux_for_two_photon_coupling(p: CircuitParams, g2_target: float,
                                 frac_limit: float = 0.499) -> CircuitParams:
    """Solve for the static flux that realizes a requested g2 (rad/s).

    Root-finds tan(pi f) against the target at fixed omega_SQ scaling; returns
    a copy of the parameters with flux_dc set. Requires m * i_p != 0 and a
    target reachable below the flux ceiling.
    """
    if p.m * p.i_p == 0:
        raise CircuitParameterError("flux solve needs nonzero M and I_p")

    def objective(frac: float) -> float:
        trial = replace(p, flux_dc=frac * PHI0)
        return two_photon_coupling(trial) - g2_target

    lo, hi = -frac_limit, frac_limit
    if objective(lo) * objective(hi) > 0:
        raise CircuitParameterError(
            f"target g2 {g2_target} not reachable below |flux| = {frac_limit} Phi0")
    frac = brentq(objective, lo, hi, xtol=1e-15, rtol=1e-14)
    return replace(p, flux_dc=frac * PHI0)
