import numpy as np
import pytest

import oracles
from biphoton import core, interferometer as itf
from biphoton.errors import ConfigError, ReconstructionError
from biphoton.medium import AtomicMedium, DriveLasers

DELAYS = (1.0e-9, 5.8e-9)


@pytest.fixture(scope="module")
def od25():
    medium = AtomicMedium(optical_depth=25.0)
    det = core.DetectionParams(duty_cycle_xi=0.012)
    pred = core.predict(medium, DriveLasers(), det)
    return medium, det, pred


def _amplitude(pair, det):
    return itf.pre_splitter_counts(pair, det)


def test_projectors_unit_norm():
    for p in (itf.H, itf.V, itf.D, itf.A, itf.R, itf.L):
        assert np.linalg.norm(p.jones) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ConfigError, match="unit norm"):
        itf.ProjectionSetting([1.0, 1.0])


def test_beam_splitter_unitary():
    u = itf.BEAM_SPLITTER
    assert np.allclose(u @ u.conj().T, np.eye(2), atol=1e-15)


def test_battery_layout():
    battery = itf.default_setting_battery(DELAYS)
    assert len(battery) == 12
    assert [(p3.label, p4.label) for _, p3, p4 in battery[:6]] == [
        ("D", "D"), ("D", "A"), ("R", "D"), ("R", "A"), ("H", "V"), ("V", "H")]
    with pytest.raises(ConfigError):
        itf.default_setting_battery([])


def test_orthogonal_projectors_show_no_interference(od25):
    _, det, pred = od25
    dt = 5.8e-9
    tau = core.symmetric_bins(500e-9, det.bin_dt)
    hv = itf.interfere(pred.pair, dt, itf.H, itf.V, det)
    direct = det.prefactor / 4 * np.abs(pred.pair.psi_plus.at(tau - dt)) ** 2
    assert np.allclose(hv.counts, direct, rtol=1e-12, atol=0)


def test_zero_delay_hom(od25):
    _, det, pred = od25
    dd = itf.interfere(pred.pair, 0.0, itf.D, itf.D, det)
    da = itf.interfere(pred.pair, 0.0, itf.D, itf.A, det)
    amp = _amplitude(pred.pair, det)
    assert np.max(dd.counts) <= 1e-20 * np.max(amp.counts)
    assert np.allclose(da.counts, amp.counts / 4, rtol=1e-12, atol=0)


def test_matches_scalar_loop_oracle(od25):
    medium, det, pred = od25
    grid, spectrum = pred.spectrum.grid, pred.spectrum

    def psi_plus(t):
        return oracles.riemann_psi(grid.samples, spectrum.values, medium.length_L, np.array([t, -t])).sum()

    tau = np.arange(-60, 61) * det.bin_dt
    for p3, p4 in ((itf.D, itf.D), (itf.R, itf.A)):
        expected = oracles.interference_rate(psi_plus, tau, 5.8e-9, p3.jones, p4.jones, det.prefactor)
        got = itf.interfere(pred.pair, 5.8e-9, p3, p4, det, tau_bins=tau)
        assert np.allclose(got.counts, expected, rtol=1e-9, atol=1e-9 * expected.max())


def test_battery_counts(od25):
    _, det, pred = od25
    meas = itf.measure_battery(pred.pair, det, DELAYS)
    assert len(meas) == 2
    assert sum(len(m.histograms) for m in meas) == 12
    assert all(len(m.settings) == 6 for m in meas)


def test_energy_accounting(od25):
    _, det, pred = od25
    totals = itf.output_port_totals(pred.pair, 5.8e-9, det)
    tau = core.symmetric_bins(500e-9, det.bin_dt)
    arrivals = det.prefactor * np.sum(np.abs(pred.pair.psi_plus.at(tau - 5.8e-9)) ** 2)
    assert totals["34"] + totals["33"] + totals["44"] == pytest.approx(arrivals, rel=1e-9)


def test_delay_beyond_window_rejected(od25):
    _, det, pred = od25
    with pytest.raises(ConfigError, match="temporal window"):
        itf.interfere(pred.pair, 30e-6, itf.D, itf.D, det)


def _round_trip(pair, det, phi):
    injected = itf.inject_phase(pair, phi)
    amp = _amplitude(injected, det)
    meas = itf.measure_battery(injected, det, DELAYS)
    profile = itf.reconstruct_phase(meas, amp, det)
    truth = phi(np.abs(profile.tau))
    err = itf.wrap(profile.phi - truth)[profile.mask]
    base = itf.reconstruct_phase(itf.measure_battery(pair, det, DELAYS), _amplitude(pair, det), det)
    err = itf.wrap(err - base.phi[profile.mask])
    return np.max(np.abs(err - np.median(err))), profile


PHASES = {
    "constant": lambda t: np.full_like(t, 0.9),
    "linear": lambda t: 1.5e7 * t,
    "quadratic": lambda t: 4e13 * t**2,
    "sinusoidal": lambda t: 0.8 * np.cos(2 * np.pi * t / 30e-9),
}


@pytest.mark.parametrize("name", sorted(PHASES))
def test_phase_round_trip(od25, name):
    _, det, pred = od25
    error, profile = _round_trip(pred.pair, det, PHASES[name])
    assert profile.mask.sum() > 20
    assert error < 0.05


def test_zero_phase_reconstruction(od25):
    _, det, pred = od25
    flat = itf.inject_phase(pred.pair, lambda t: np.zeros_like(t), magnitude_only=True)
    profile = itf.reconstruct_phase(itf.measure_battery(flat, det, DELAYS), _amplitude(flat, det), det)
    assert np.max(np.abs(profile.phi[profile.mask])) < 1e-6


def test_native_phase_symmetric(od25):
    _, det, pred = od25
    profile = itf.reconstruct_phase(itf.measure_battery(pred.pair, det, DELAYS), _amplitude(pred.pair, det), det)
    assert itf.symmetry_error(profile) < 0.05
    assert profile.step_delay == pytest.approx(1e-9)
    assert set(profile.consistency) == {5.8e-9}
    assert profile.consistency[5.8e-9] < 0.05


def test_insufficient_settings(od25):
    _, det, pred = od25
    settings = [(itf.H, itf.V), (itf.V, itf.H), (itf.D, itf.D)]
    hists = [itf.interfere(pred.pair, 1e-9, p3, p4, det) for p3, p4 in settings]
    meas = itf.InterferenceMeasurement(1e-9, settings, hists)
    with pytest.raises(ReconstructionError, match="sine"):
        itf.reconstruct_phase(meas, _amplitude(pred.pair, det), det)


def test_empty_amplitude_rejected(od25):
    _, det, pred = od25
    amp = _amplitude(pred.pair, det)
    empty = core.CoincidenceHistogram(amp.tau, np.zeros_like(amp.counts), amp.bin_dt)
    meas = itf.measure_battery(pred.pair, det, DELAYS)
    with pytest.raises(ReconstructionError, match="empty"):
        itf.reconstruct_phase(meas, empty, det)


def test_deterministic(od25):
    _, det, pred = od25
    a = itf.measure_battery(pred.pair, det, DELAYS)
    b = itf.measure_battery(pred.pair, det, DELAYS)
    for ma, mb in zip(a, b):
        for ha, hb in zip(ma.histograms, mb.histograms):
            assert np.array_equal(ha.counts, hb.counts)


def test_wrap_range():
    angles = np.linspace(-20, 20, 401)
    wrapped = itf.wrap(angles)
    assert np.all(wrapped > -np.pi) and np.all(wrapped <= np.pi)
    assert np.allclose(np.exp(1j * wrapped), np.exp(1j * angles))
