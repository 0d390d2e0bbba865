import math

import numpy as np
import pytest

from tprabi.circuit import (
    PHI0,
    CircuitParameterError,
    CircuitParams,
    capacitance_for_frequency,
    flux_for_two_photon_coupling,
    josephson_energy,
    josephson_inductance,
    one_photon_coupling,
    phase_from_bias,
    quartic_ratio,
    squid_frequency,
    two_photon_coupling,
)
from scipy.constants import hbar as HBAR

GHZ = 2 * math.pi * 1e9


def base_params(**kw):
    defaults = dict(i_c=1e-6, c_sq=6.15e-12, m=15e-12, i_p=4e-7)
    defaults.update(kw)
    return CircuitParams(**defaults)


def test_josephson_inductance_reference_value():
    p = base_params(flux_dc=0.0, phase_dc=0.0)
    lj = josephson_inductance(p)
    assert lj == pytest.approx(PHI0 / (4 * math.pi * 1e-6), rel=1e-12)
    assert lj == pytest.approx(1.646e-10, rel=1e-3)


def test_inductance_doubles_when_flux_cosine_halves():
    p0 = base_params()
    frac = math.acos(0.5) / math.pi  # cos(pi f) = 1/2
    p1 = base_params(flux_dc=frac * PHI0)
    assert josephson_inductance(p1) == pytest.approx(2 * josephson_inductance(p0), rel=1e-12)


def test_inductance_diverges_at_half_flux_quantum():
    with pytest.raises(CircuitParameterError):
        CircuitParams(i_c=1e-6, c_sq=1e-12, flux_dc=0.5 * PHI0)


def test_inductance_matches_potential_curvature():
    # 1/L_J equals the numeric curvature of the SQUID potential
    # U(Phi) = -2 E_J cos(pi Phi_DC/Phi0) cos(phase + 2 pi Phi/Phi0) at Phi = 0
    for frac in (-0.3, -0.1, 0.0, 0.2, 0.4):
        p = base_params(flux_dc=frac * PHI0)
        ej = josephson_energy(p)

        def potential(phi_flux):
            return (-2 * ej * math.cos(math.pi * frac)
                    * math.cos(2 * math.pi * phi_flux / PHI0))

        h = PHI0 * 1e-4
        curvature = (potential(h) - 2 * potential(0.0) + potential(-h)) / h**2
        assert curvature == pytest.approx(1.0 / josephson_inductance(p), rel=1e-6)


def test_squid_frequency_reference_point():
    # C_SQ that puts the zero-bias resonance at 5 GHz is about 6.15 pF
    p = base_params(c_sq=1e-12)
    c_needed = capacitance_for_frequency(p, 5 * GHZ)
    assert c_needed == pytest.approx(6.157e-12, rel=1e-3)
    tuned = base_params(c_sq=c_needed)
    assert squid_frequency(tuned) == pytest.approx(5 * GHZ, rel=1e-12)


def test_squid_frequency_scalings():
    p = base_params()
    f0 = squid_frequency(p)
    quadrupled_c = base_params(c_sq=4 * p.c_sq)
    assert squid_frequency(quadrupled_c) == pytest.approx(f0 / 2, rel=1e-12)
    # doubling L_J (halving I_C) lowers the frequency by sqrt(2)
    halved_ic = base_params(i_c=0.5e-6)
    assert squid_frequency(halved_ic) == pytest.approx(f0 / math.sqrt(2), rel=1e-12)


def test_two_photon_coupling_switches_off_at_zero_flux():
    assert two_photon_coupling(base_params(flux_dc=0.0)) == 0.0


def test_two_photon_coupling_odd_in_flux():
    p_plus = base_params(flux_dc=0.2 * PHI0)
    p_minus = base_params(flux_dc=-0.2 * PHI0)
    assert two_photon_coupling(p_plus) == pytest.approx(-two_photon_coupling(p_minus))


def test_two_photon_coupling_requires_zero_bias():
    p = base_params(flux_dc=0.1 * PHI0, phase_dc=0.05)
    with pytest.raises(CircuitParameterError):
        two_photon_coupling(p)


def test_flux_solve_round_trip():
    p = base_params()
    target = 0.01 * squid_frequency(p)
    solved = flux_for_two_photon_coupling(p, target)
    assert two_photon_coupling(solved) == pytest.approx(target, rel=1e-9)


def test_one_photon_coupling_vanishes_without_bias():
    p = base_params(flux_dc=0.2 * PHI0, phase_dc=0.0)
    assert one_photon_coupling(p) == 0.0


def test_one_photon_coupling_odd_in_bias_phase():
    p_plus = base_params(flux_dc=0.2 * PHI0, phase_dc=0.1)
    p_minus = base_params(flux_dc=0.2 * PHI0, phase_dc=-0.1)
    assert one_photon_coupling(p_plus) == pytest.approx(-one_photon_coupling(p_minus))


def test_one_photon_coupling_linear_in_small_bias_current():
    # g1 through phase_from_bias responds linearly for small I_B
    slopes = []
    for ib in (1e-9, 2e-9, 4e-9):
        p = base_params(flux_dc=0.2 * PHI0, i_b=ib)
        phase = phase_from_bias(p)
        p_biased = base_params(flux_dc=0.2 * PHI0, phase_dc=phase)
        slopes.append(one_photon_coupling(p_biased) / ib)
    assert np.allclose(slopes, slopes[0], rtol=1e-4)


def test_phase_from_bias_domain_check():
    p = base_params(flux_dc=0.4 * PHI0, i_b=5e-6)
    with pytest.raises(CircuitParameterError):
        phase_from_bias(p)


def test_quartic_ratio_prefactor_quotient():
    # independent reconstruction from the phase zero-point amplitude:
    # ratio = (2 pi / Phi0)^2 (hbar w L_J / 2) / 12
    for frac in (0.0, 0.15, 0.35):
        p = base_params(flux_dc=frac * PHI0)
        w = squid_frequency(p)
        lj = josephson_inductance(p)
        lam2 = (2 * math.pi / PHI0) ** 2 * (HBAR * w * lj / 2.0)
        assert quartic_ratio(p) == pytest.approx(lam2 / 12.0, rel=1e-12)


def test_quartic_ratio_reference_magnitude_at_zero_flux():
    p = base_params(c_sq=capacitance_for_frequency(base_params(c_sq=1e-12), 5 * GHZ))
    ratio = quartic_ratio(p)
    assert ratio == pytest.approx(math.pi * HBAR * 5 * GHZ / (24 * PHI0 * 1e-6), rel=1e-12)
    assert 1e-4 < ratio < 1e-3


def test_quartic_ratio_doubles_when_critical_current_halves():
    # at fixed resonance frequency (capacitance retuned) the ratio goes as 1/I_C
    p1 = base_params(c_sq=capacitance_for_frequency(base_params(c_sq=1e-12), 5 * GHZ))
    half = CircuitParams(i_c=0.5e-6, c_sq=1e-12)
    p2 = CircuitParams(i_c=0.5e-6,
                       c_sq=capacitance_for_frequency(half, 5 * GHZ))
    assert quartic_ratio(p2) == pytest.approx(2 * quartic_ratio(p1), rel=1e-12)


def test_round_trip_parameters_to_couplings_and_back():
    p = base_params(flux_dc=0.31 * PHI0)
    w = squid_frequency(p)
    g2 = two_photon_coupling(p)
    ratio = quartic_ratio(p)
    # invert: flux from the quartic ratio, then M I_p from g2
    cos_flux = HBAR * w * math.pi / (24 * PHI0 * p.i_c * ratio)
    flux = math.acos(cos_flux) / math.pi * PHI0
    assert flux == pytest.approx(p.flux_dc, rel=1e-9)
    mi_p = -g2 * PHI0 / ((math.pi / 4) * math.tan(math.pi * flux / PHI0) * w)
    assert mi_p == pytest.approx(p.m * p.i_p, rel=1e-9)


def test_coupling_ratio_scale_invariance():
    # g2 / omega_SQ depends only on flux fraction and M I_p / Phi0, over three
    # decades of frequency set by the capacitance
    base = base_params(flux_dc=0.25 * PHI0)
    ratios = []
    for scale in (1.0, 1e2, 1e4):
        p = CircuitParams(i_c=base.i_c, c_sq=base.c_sq * scale, m=base.m,
                          i_p=base.i_p, flux_dc=base.flux_dc)
        ratios.append(two_photon_coupling(p) / squid_frequency(p))
    assert np.allclose(ratios, ratios[0], rtol=1e-12)


def test_operating_point_quartic_ratio_lands_near_permille():
    # flux tuned to realize g2 = 0.01 omega_SQ with M I_p / Phi0 = 3e-3
    p = base_params(c_sq=capacitance_for_frequency(base_params(c_sq=1e-12), 5 * GHZ),
                    m=15e-12, i_p=3e-3 * PHI0 / 15e-12)
    target = 0.01 * squid_frequency(p)
    tuned = flux_for_two_photon_coupling(p, -target)
    ratio = quartic_ratio(tuned)
    assert 5e-4 < ratio < 5e-3
