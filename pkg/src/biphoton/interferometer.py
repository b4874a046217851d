"""
Time-resolved two-photon interference and phase reconstruction.

Layout: the photon leaving arm 1 is horizontally polarised, the arm-2 photon
is vertical and delayed by ``delay_dt``. Both meet on a 50:50 beam splitter
whose outputs 3 and 4 are projected onto Jones vectors ``e3``, ``e4`` before
detection. With Psi_+(t1, t2) = exp(-i w0 (t1 + t2)) psi_+(t2 - t1) and
tau = t4 - t3, the coincidence amplitude is

    U31 U42 (e3_H* e4_V*) psi_+(tau - dt) + U41 U32 (e3_V* e4_H*) psi_+(-tau - dt)

times exp(-i w0 (t3 + t4 - dt)). The delayed photon is the arm-2 photon in
both paths, so the carrier factor exp(i w0 dt) is common (s1 = s2 = 1) and
drops out of every rate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import (
    DEFAULT_TAU_RANGE,
    CoincidenceHistogram,
    DetectionParams,
    SymmetrizedPair,
    TemporalWavefunction,
    symmetric_bins,
)
from .errors import ConfigError, ReconstructionError

# rows: outputs (3, 4); columns: inputs (1, 2)
BEAM_SPLITTER = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class ProjectionSetting:
    jones: np.ndarray
    label: str = ""

    def __post_init__(self):
        jones = np.asarray(self.jones, dtype=complex)
        if jones.shape != (2,):
            raise ConfigError("a Jones vector has exactly two components (H, V)")
        if abs(np.linalg.norm(jones) - 1.0) > 1e-12:
            raise ConfigError(f"Jones vector must be unit norm, got |e| = {np.linalg.norm(jones)!r}")
        object.__setattr__(self, "jones", jones)

    def __eq__(self, other):
        return isinstance(other, ProjectionSetting) and np.allclose(self.jones, other.jones, atol=1e-12)

    def __hash__(self):
        return hash(self.label)


_S = 1.0 / np.sqrt(2.0)
H = ProjectionSetting([1.0, 0.0], "H")
V = ProjectionSetting([0.0, 1.0], "V")
D = ProjectionSetting([_S, _S], "D")
A = ProjectionSetting([_S, -_S], "A")
R = ProjectionSetting([_S, 1j * _S], "R")
L = ProjectionSetting([_S, -1j * _S], "L")

BATTERY_PAIRS = ((D, D), (D, A), (R, D), (R, A), (H, V), (V, H))


@dataclass(frozen=True, eq=False)
class InterferenceMeasurement:
    delay_dt: float
    settings: List[Tuple[ProjectionSetting, ProjectionSetting]]
    histograms: List[CoincidenceHistogram]

    def __post_init__(self):
        if len(self.settings) != len(self.histograms):
            raise ConfigError("one histogram per projection setting is required")
        if self.delay_dt < 0:
            raise ConfigError("delay_dt must be >= 0")


@dataclass(frozen=True, eq=False)
class PhaseProfile:
    tau: np.ndarray
    phi: np.ndarray
    mask: np.ndarray
    step_delay: float = 0.0
    # max |wrapped discrepancy| on the mask for every delay not used for stepping
    consistency: Dict[float, float] = field(default_factory=dict)


def wrap(angle):
    """Map angles onto (-pi, pi]."""
    return -((-np.asarray(angle) + np.pi) % (2.0 * np.pi) - np.pi)


def default_setting_battery(delays: Sequence[float]):
    """Six projector pairs per delay covering both interference quadratures."""
    delays = list(delays)
    if not delays:
        raise ConfigError("at least one delay is required")
    return [(float(dt), p3, p4) for dt in delays for p3, p4 in BATTERY_PAIRS]


def _path_weights(proj3: ProjectionSetting, proj4: ProjectionSetting):
    e3 = np.conj(proj3.jones)
    e4 = np.conj(proj4.jones)
    u = BEAM_SPLITTER
    # arm 1 (H) -> port 3, arm 2 (V) -> port 4 ; and the exchanged path
    direct = u[0, 0] * u[1, 1] * e3[0] * e4[1]
    exchanged = u[1, 0] * u[0, 1] * e3[1] * e4[0]
    return direct, exchanged


def _plus_evaluator(pair: SymmetrizedPair) -> Callable[[np.ndarray], np.ndarray]:
    return pair.psi_plus.at


def _check_delay(pair: SymmetrizedPair, delay_dt: float, tau: np.ndarray):
    half_window = float(pair.psi.tau[-1])
    if delay_dt < 0:
        raise ConfigError("delay_dt must be >= 0")
    if delay_dt > half_window or np.max(np.abs(tau)) + delay_dt > half_window:
        raise ConfigError(
            f"delay {delay_dt:g} s exceeds half the temporal window ({half_window:g} s)"
        )


def interfere(pair: SymmetrizedPair, delay_dt: float, proj3: ProjectionSetting,
              proj4: ProjectionSetting, det: DetectionParams, tau_bins=None,
              tau_range: float = DEFAULT_TAU_RANGE) -> CoincidenceHistogram:
    """Coincidence histogram between D3 and D4 behind the beam splitter.

    Rate = (xi eta T dt / 4) * |c psi_+(tau - dt) - d psi_+(-tau - dt)|^2 with
    c = e3_H* e4_V*, d = e3_V* e4_H*; the relative minus sign is the
    beam-splitter (Hong-Ou-Mandel) sign, the 1/4 its two amplitude factors.
    """
    tau = symmetric_bins(tau_range, det.bin_dt) if tau_bins is None else np.asarray(tau_bins, dtype=float)
    _check_delay(pair, delay_dt, tau)
    psi_plus = _plus_evaluator(pair)
    direct, exchanged = _path_weights(proj3, proj4)
    amplitude = direct * psi_plus(tau - delay_dt) + exchanged * psi_plus(-tau - delay_dt)
    counts = det.duty_cycle_xi * det.efficiency_eta * det.acquisition_T * det.bin_dt * np.abs(amplitude) ** 2
    return CoincidenceHistogram(tau, counts, det.bin_dt, label=f"{proj3.label}/{proj4.label}")


def pre_splitter_counts(pair: SymmetrizedPair, det: DetectionParams, tau_bins=None,
                        tau_range: float = DEFAULT_TAU_RANGE) -> CoincidenceHistogram:
    """Coincidences between the two arms before the beam splitter, prop. to |psi_+|^2."""
    tau = symmetric_bins(tau_range, det.bin_dt) if tau_bins is None else np.asarray(tau_bins, dtype=float)
    counts = det.prefactor * np.abs(_plus_evaluator(pair)(tau)) ** 2
    return CoincidenceHistogram(tau, counts, det.bin_dt, label="amplitude")


def output_port_totals(pair: SymmetrizedPair, delay_dt: float, det: DetectionParams,
                       basis3=(H, V), basis4=(H, V), tau_bins=None,
                       tau_range: float = DEFAULT_TAU_RANGE) -> Dict[str, float]:
    """Total detection probability (in counts) per output-port pairing.

    "34" sums the D3-D4 coincidences over the given complete projector
    bases; "33" and "44" are the two bunched outcomes, which carry no
    interference because the photons sit in orthogonal polarisations.
    """
    tau = symmetric_bins(tau_range, det.bin_dt) if tau_bins is None else np.asarray(tau_bins, dtype=float)
    coincident = 0.0
    for e3 in basis3:
        for e4 in basis4:
            coincident += interfere(pair, delay_dt, e3, e4, det, tau_bins=tau).counts.sum()
    u = BEAM_SPLITTER
    arrival = det.prefactor * np.abs(_plus_evaluator(pair)(tau - delay_dt)) ** 2
    return {
        "34": float(coincident),
        "33": float(abs(u[0, 0] * u[0, 1]) ** 2 * arrival.sum()),
        "44": float(abs(u[1, 0] * u[1, 1]) ** 2 * arrival.sum()),
    }


def measure_battery(pair: SymmetrizedPair, det: DetectionParams,
                    delays: Sequence[float] = (1.0e-9, 5.8e-9), tau_bins=None,
                    tau_range: float = DEFAULT_TAU_RANGE) -> List[InterferenceMeasurement]:
    """Run :func:`interfere` for every setting of the default battery, grouped by delay."""
    out = []
    for dt in delays:
        settings = [(p3, p4) for d, p3, p4 in default_setting_battery([dt])]
        hists = [interfere(pair, dt, p3, p4, det, tau_bins=tau_bins, tau_range=tau_range)
                 for p3, p4 in settings]
        out.append(InterferenceMeasurement(float(dt), settings, hists))
    return out


def inject_phase(pair: SymmetrizedPair, phi: Callable[[np.ndarray], np.ndarray],
                 magnitude_only: bool = False) -> SymmetrizedPair:
    """Return a pair whose bosonic amplitude carries an extra phase profile.

    The profile is applied as ``phi(|tau|)`` so the modified psi_+ stays
    exchange symmetric. ``magnitude_only`` first strips the original phase.
    """
    base = pair.psi_plus

    def evaluate(t, _base=base):
        t = np.asarray(t, dtype=float)
        value = _base.at(t)
        if magnitude_only:
            value = np.abs(value).astype(complex)
        return value * np.exp(1j * phi(np.abs(t)))

    values = evaluate(base.tau)
    new_plus = TemporalWavefunction(base.tau, values, base.carrier_omega0, evaluator=evaluate)
    return SymmetrizedPair(psi=pair.psi, psi_plus=new_plus, psi_minus=pair.psi_minus)


def _quadratures(meas: InterferenceMeasurement, det_scale: float):
    """Least-squares Re/Im of psi_+(tau-dt) psi_+*(-tau-dt) from one delay's battery."""
    rows = []
    for p3, p4 in meas.settings:
        c, d = _path_weights(p3, p4)
        # |c a + d b|^2 = |c|^2 X + |d|^2 Y + 2 Re(c d*) R - 2 Im(c d*) I, with a b* = R + iI
        cross = c * np.conj(d)
        rows.append([abs(c) ** 2, abs(d) ** 2, 2 * cross.real, -2 * cross.imag])
    design = np.asarray(rows) * det_scale
    pinv = np.linalg.pinv(design)
    resolved = pinv @ design
    for k, name in ((2, "cosine"), (3, "sine")):
        unit = np.zeros(4)
        unit[k] = 1.0
        if not np.allclose(resolved @ unit, unit, atol=1e-9):
            raise ReconstructionError(
                f"settings at delay {meas.delay_dt:g} s do not resolve the {name} quadrature"
            )
    counts = np.vstack([np.asarray(h.counts, dtype=float) for h in meas.histograms])
    solution = pinv @ counts
    return solution[2], solution[3]


def reconstruct_phase(meas, amplitude: CoincidenceHistogram, det: Optional[DetectionParams] = None,
                      mask_fraction: float = 0.05) -> PhaseProfile:
    """Recover phi(tau) of the bosonic amplitude from interference batteries.

    For each delay, the battery fixes psi_+(tau - dt) psi_+*(-tau - dt), whose
    argument is -[phi(tau + dt) - phi(tau - dt)] for an exchange-symmetric
    amplitude. The smallest delay is integrated on the lattice (2k+1)*dt,
    the result is interpolated onto the bins and shifted so phi(0) = 0.
    Every other delay is only checked against the integrated profile.
    """
    measurements = [meas] if isinstance(meas, InterferenceMeasurement) else list(meas)
    if not measurements:
        raise ReconstructionError("no interference measurements supplied")
    tau = amplitude.tau
    if not np.array_equal(tau, -tau[::-1]):
        raise ReconstructionError("amplitude histogram bins must be symmetric about 0")
    amp = np.asarray(amplitude.counts, dtype=float)
    if amp.max() <= 0:
        raise ReconstructionError("amplitude histogram is empty; the phase mask would be empty")
    mask = amp >= mask_fraction * amp.max()
    if not mask.any():
        raise ReconstructionError("amplitude mask is empty")
    scale = det.prefactor if det is not None else 1.0

    phase_steps = {}
    for m in measurements:
        if not all(h.same_bins(amplitude) for h in m.histograms):
            raise ReconstructionError("interference histograms must share the amplitude bins")
        re, im = _quadratures(m, scale)
        phase_steps[m.delay_dt] = np.arctan2(-im, re)

    step_delay = min(d for d in phase_steps if d > 0)
    steps = phase_steps[step_delay]
    # lattice u_k = (2k+1) dt, linked by phi(u_k) - phi(u_{k-1}) = dphi(2k dt)
    k_max = int(np.floor((tau[-1] - step_delay) / (2 * step_delay)))
    k = np.arange(-k_max, k_max + 1)
    centres = 2.0 * k * step_delay
    link = np.interp(centres, tau, steps)
    # walk from the outermost lattice point; the constant is fixed below
    lattice = (2.0 * np.concatenate([k[:1] - 1, k]) + 1.0) * step_delay
    phi_lattice = np.concatenate([[0.0], np.cumsum(link)])

    phi = np.interp(tau, lattice, phi_lattice)
    phi -= np.interp(0.0, lattice, phi_lattice)
    phi = np.where(mask, phi, np.nan)

    consistency = {}
    for delay, measured in phase_steps.items():
        if delay == step_delay:
            continue
        predicted = np.interp(tau + delay, lattice, phi_lattice) - np.interp(tau - delay, lattice, phi_lattice)
        valid = mask & (np.abs(tau) + delay <= lattice[-1])
        if valid.any():
            consistency[float(delay)] = float(np.max(np.abs(wrap(predicted - measured)[valid])))
    return PhaseProfile(tau, phi, mask, float(step_delay), consistency)


def symmetry_error(profile: PhaseProfile) -> float:
    """max |phi(tau) - phi(-tau)| (wrapped) over bins masked on both sides."""
    both = profile.mask & profile.mask[::-1]
    if not both.any():
        return float("nan")
    diff = wrap(profile.phi - profile.phi[::-1])
    return float(np.max(np.abs(diff[both])))
