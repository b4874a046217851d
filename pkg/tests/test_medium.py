import numpy as np
import pytest

import oracles
from biphoton.core import SpectralGrid
from biphoton.errors import ConfigError, DomainError
from biphoton.medium import (
    AtomicMedium,
    DriveLasers,
    PhaseMatchConvention,
    coupling_kappa,
    eit_denominator,
    mhz,
    phase_matching,
    sinc,
    susceptibility,
    wavenumber,
    wavenumber_offset,
)

W1 = mhz(1.0)

# frozen from the 50-digit mpmath oracle in oracles.py
CHI_OD25_1MHZ = 1.1851046758001078e-05 + 9.695321146719114e-07j
K_OD25_1MHZ = 7903424.576391761776606427 + 3.831266566829403760790462j
PHI_OD25_1MHZ = 0.7725708647900429 - 0.3965349931068406j
KAPPA_OD7_0 = -0.003893725621977813 - 1.9728209818020919j
PHI_OD7_0 = 0.8853136768705806 - 0.45439991780551914j


@pytest.fixture
def od25():
    return AtomicMedium(optical_depth=25.0)


@pytest.fixture
def od7():
    return AtomicMedium(optical_depth=7.0)


@pytest.fixture
def lasers():
    return DriveLasers()


def test_frozen_constants_match_oracle():
    w = 2 * oracles.PI * oracles.mp.mpf("1e6")
    p25 = oracles.preset_parameters(25)
    p7 = oracles.preset_parameters(7)
    assert complex(oracles.chi(w, p25)) == pytest.approx(CHI_OD25_1MHZ, rel=1e-15)
    assert complex(oracles.k(w, p25)) == pytest.approx(K_OD25_1MHZ, rel=1e-15)
    assert complex(oracles.phi(w, p25)) == pytest.approx(PHI_OD25_1MHZ, rel=1e-15)
    assert complex(oracles.kappa(0, p7)) == pytest.approx(KAPPA_OD7_0, rel=1e-15)
    assert complex(oracles.phi(0, p7)) == pytest.approx(PHI_OD7_0, rel=1e-15)


def test_susceptibility_golden(od25, lasers):
    assert susceptibility(W1, od25, lasers) == pytest.approx(CHI_OD25_1MHZ, rel=1e-12)


def test_susceptibility_perfect_eit_is_zero(lasers):
    medium = AtomicMedium(gamma12=0.0)
    assert susceptibility(0.0, medium, lasers) == 0


def test_susceptibility_two_level_limit(od25):
    chi = susceptibility(0.0, od25, DriveLasers(omega_c_rabi=0.0))
    expected = 1j * od25.optical_depth / (od25.k0 * od25.length_L)
    assert abs(chi - expected) <= 1e-12 * abs(expected)


def test_eit_reduces_resonant_absorption(od25, lasers):
    with_eit = susceptibility(0.0, od25, lasers).imag
    two_level = susceptibility(0.0, od25, DriveLasers(omega_c_rabi=0.0)).imag
    assert abs(with_eit) < abs(two_level)


def test_susceptibility_domain_error():
    medium = AtomicMedium(gamma12=0.0)
    dark = DriveLasers(omega_c_rabi=0.0)
    with pytest.raises(DomainError) as info:
        susceptibility(np.array([1e6, 0.0, 2e6]), medium, dark)
    assert info.value.varpi == 0.0
    assert info.value.index == 1


def test_passivity_on_default_grid(od25, lasers):
    chi = susceptibility(SpectralGrid().samples, od25, lasers)
    assert np.all(chi.imag >= -1e-15)


def test_wavenumber_golden(od25, lasers):
    assert wavenumber(W1, od25, lasers) == pytest.approx(K_OD25_1MHZ, rel=1e-12)


def test_wavenumber_vacuum_limit(lasers):
    medium = AtomicMedium(optical_depth=1e-300)
    k = wavenumber(np.linspace(-1e8, 1e8, 11), medium, lasers)
    assert np.all(k.real == medium.k0)
    assert np.all(np.abs(k.imag) < 1e-280)


@pytest.mark.parametrize("od", [1e-6, 1e-4, 1e-2])
def test_wavenumber_small_chi_taylor_bound(od, lasers):
    medium = AtomicMedium(optical_depth=od)
    w = np.linspace(-mhz(50), mhz(50), 101)
    chi = susceptibility(w, medium, lasers)
    assert np.all(np.abs(chi) < 1e-3)
    # compared on the offset k - k0 so the bound is not swamped by rounding of k0
    dk = wavenumber_offset(w, medium, lasers)
    assert np.all(np.abs(dk - medium.k0 * chi / 2) <= np.abs(medium.k0 * chi**2))


def test_wavenumber_branch_continuity(od25, lasers):
    grid = SpectralGrid()
    w = grid.samples
    k = wavenumber(w, od25, lasers)
    assert np.all(k.real > 0)
    # |dk| per step bounded by a generous multiple of the local finite-difference slope
    dk = np.abs(np.diff(k))
    slope = np.abs(np.gradient(k, w))
    bound = 10 * grid.step * np.maximum(slope[:-1], slope[1:])
    assert np.all(dk <= bound + 1e-12 * od25.k0)


def test_kappa_golden(od7, lasers):
    assert coupling_kappa(0.0, od7, lasers) == pytest.approx(KAPPA_OD7_0, rel=1e-12)


def test_kappa_vanishes_without_pump(od7):
    w = SpectralGrid().samples
    assert np.all(coupling_kappa(w, od7, DriveLasers(omega_p_rabi=0.0)) == 0)


def test_kappa_inverse_detuning_scaling(od7):
    far = DriveLasers(delta_p=mhz(3040.0))
    farther = DriveLasers(delta_p=mhz(6080.0))
    ratio = abs(coupling_kappa(0.0, od7, far)) / abs(coupling_kappa(0.0, od7, farther))
    assert ratio == pytest.approx(2.0, rel=0.01)


def test_kappa_shares_eit_denominator(od7, lasers):
    w = np.linspace(-mhz(100), mhz(100), 257)
    kappa = coupling_kappa(w, od7, lasers)
    expected = eit_denominator(0.0, od7, lasers) / eit_denominator(w, od7, lasers)
    assert np.allclose(kappa / coupling_kappa(0.0, od7, lasers), expected, rtol=1e-12, atol=0)


def test_phase_matching_golden(od25, od7, lasers):
    assert phase_matching(W1, od25, lasers) == pytest.approx(PHI_OD25_1MHZ, rel=1e-10)
    assert phase_matching(0.0, od7, lasers) == pytest.approx(PHI_OD7_0, rel=1e-10)


def test_phase_matching_vacuum(lasers):
    medium = AtomicMedium(optical_depth=1e-300)
    w = np.linspace(-mhz(200), mhz(200), 41)
    phi = phase_matching(w, medium, lasers)
    assert np.allclose(phi, np.exp(1j * medium.k0 * medium.length_L), rtol=0, atol=1e-15)
    assert np.allclose(np.abs(phi), 1.0, atol=1e-15)


def test_phase_matching_magnitude_even(od25, lasers):
    w = np.linspace(0, mhz(150), 301)
    assert np.allclose(np.abs(phase_matching(w, od25, lasers)), np.abs(phase_matching(-w, od25, lasers)),
                       rtol=1e-12, atol=0)


def test_phase_matching_conventions_differ_only_with_mismatch(od25):
    w = np.linspace(-mhz(30), mhz(30), 61)
    matched = DriveLasers()
    a = phase_matching(w, od25, matched, PhaseMatchConvention.WITH_LENGTH)
    b = phase_matching(w, od25, matched, PhaseMatchConvention.AS_PRINTED)
    assert np.array_equal(a, b)
    mismatched = DriveLasers(pump_coupling_wavenumber_diff=200.0)
    a = phase_matching(w, od25, mismatched, "with-length")
    b = phase_matching(w, od25, mismatched, "as-printed")
    assert not np.allclose(a, b)


def test_phase_matching_with_length_oracle(od25):
    lasers = DriveLasers(pump_coupling_wavenumber_diff=150.0)
    p = oracles.preset_parameters(25)
    p["dkpc"] = oracles.mp.mpf(150)
    w = 2 * oracles.PI * oracles.mp.mpf("3e6")
    for flag, convention in ((True, "with-length"), (False, "as-printed")):
        expected = complex(oracles.phi(w, p, with_length=flag))
        assert phase_matching(mhz(3.0), od25, lasers, convention) == pytest.approx(expected, rel=1e-10)


def test_sinc():
    assert sinc(0.0) == 1.0
    assert sinc(np.pi) == pytest.approx(0.0, abs=1e-16)
    assert sinc(0.5) == pytest.approx(np.sin(0.5) / 0.5)


@pytest.mark.parametrize("field,value", [
    ("optical_depth", -1.0), ("length_L", 0.0), ("gamma13", 0.0), ("gamma12", -1.0),
    ("carrier_wavelength", 0.0), ("dipole_ratio", 0.0),
])
def test_medium_invariants(field, value):
    with pytest.raises(ConfigError, match=field):
        AtomicMedium(**{field: value})


@pytest.mark.parametrize("field,value", [
    ("omega_c_rabi", -1.0), ("omega_p_rabi", -1.0), ("theta", np.pi / 2), ("theta", -0.1),
])
def test_laser_invariants(field, value):
    with pytest.raises(ConfigError, match=field):
        DriveLasers(**{field: value})
