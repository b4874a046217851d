"""
Biphoton pipeline: spectral grid -> joint spectral amplitude -> temporal
wavefunction -> exchange symmetrisation -> coincidence histograms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.signal import czt

from .errors import ConfigError, DomainError
from .medium import (
    TWO_PI,
    AtomicMedium,
    ComplexSpectrum,
    DriveLasers,
    PhaseMatchConvention,
    coupling_kappa,
    phase_matching,
)

DEFAULT_TAU_RANGE = 500e-9


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform detuning grid ``varpi_j = (j - N/2) * span/N`` for j = 0..N-1."""

    n_points: int = 2**14
    span: float = TWO_PI * 400e6

    def __post_init__(self):
        n = int(self.n_points)
        if n != self.n_points or n < 2**10 or n & (n - 1):
            raise ConfigError(f"n_points must be a power of two >= 1024, got {self.n_points!r}")
        if not (np.isfinite(self.span) and self.span > 0):
            raise ConfigError(f"span must be a finite positive number, got {self.span!r}")

    @property
    def step(self) -> float:
        return self.span / self.n_points

    @property
    def samples(self) -> np.ndarray:
        return (np.arange(self.n_points) - self.n_points // 2) * self.step

    @property
    def tau_step(self) -> float:
        return TWO_PI / self.span

    @property
    def window(self) -> float:
        """Temporal period 2*pi/step implied by the discrete transform."""
        return TWO_PI / self.step

    def check_tau_range(self, tau_range: float) -> None:
        # the exported range [-tau_range, tau_range] must fit in one period
        if 2.0 * tau_range >= self.window:
            raise ConfigError(
                f"requested tau range +/-{tau_range:g} s exceeds the temporal window "
                f"{self.window:g} s of the spectral grid (Nyquist)"
            )


def _uniform(tau: np.ndarray) -> bool:
    if tau.size < 3:
        return tau.size > 0
    d = np.diff(tau)
    return bool(np.all(np.abs(d - d[0]) <= 1e-9 * abs(d[0]))) and d[0] != 0


def _dft_eval(omega_first: float, omega_step: float, coeffs: np.ndarray, tau) -> np.ndarray:
    """Evaluate sum_j coeffs[j] * exp(-i (omega_first + j*omega_step) tau)."""
    tau = np.asarray(tau, dtype=float)
    flat = tau.ravel()
    if flat.size == 0:
        return np.zeros(tau.shape, dtype=complex)
    if _uniform(flat) and flat.size > 1:
        dtau = flat[1] - flat[0]
        out = czt(coeffs, m=flat.size, w=np.exp(-1j * omega_step * dtau),
                  a=np.exp(1j * omega_step * flat[0]))
        out = out * np.exp(-1j * omega_first * flat)
    else:
        omega = omega_first + omega_step * np.arange(coeffs.size)
        out = np.empty(flat.size, dtype=complex)
        chunk = max(1, 2**22 // coeffs.size)
        for start in range(0, flat.size, chunk):
            block = flat[start:start + chunk]
            out[start:start + chunk] = np.exp(-1j * np.outer(block, omega)) @ coeffs
    return out.reshape(tau.shape)


@dataclass(frozen=True, eq=False)
class TemporalWavefunction:
    """Relative two-photon amplitude psi(tau) on a tau grid symmetric about 0.

    ``evaluator`` gives the exact value at arbitrary delays when the function
    is known beyond its samples (e.g. the discretised spectral integral);
    otherwise :meth:`at` interpolates the samples linearly.
    """

    tau: np.ndarray
    values: np.ndarray
    carrier_omega0: float
    evaluator: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)

    def __post_init__(self):
        tau = np.asarray(self.tau, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if tau.shape != values.shape or tau.ndim != 1:
            raise ConfigError("tau grid and values must be 1-d arrays of equal length")
        if not np.all(np.isfinite(values)):
            raise DomainError("temporal wavefunction contains non-finite samples")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "values", values)

    @property
    def tau_step(self) -> float:
        return float(self.tau[1] - self.tau[0])

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.tau, -self.tau[::-1]))

    def at(self, tau) -> np.ndarray:
        tau = np.asarray(tau, dtype=float)
        if self.evaluator is not None:
            return self.evaluator(tau)
        re = np.interp(tau, self.tau, self.values.real, left=0.0, right=0.0)
        im = np.interp(tau, self.tau, self.values.imag, left=0.0, right=0.0)
        return re + 1j * im

    def two_time(self, t1, t2) -> np.ndarray:
        """Full amplitude exp(-i w0 (t1 + t2)) psi(t2 - t1) with the carrier restored."""
        t1 = np.asarray(t1, dtype=float)
        t2 = np.asarray(t2, dtype=float)
        return np.exp(-1j * self.carrier_omega0 * (t1 + t2)) * self.at(t2 - t1)


@dataclass(frozen=True, eq=False)
class SymmetrizedPair:
    """psi_plus = psi(tau) + psi(-tau) (bosonic), psi_minus = psi(tau) - psi(-tau)."""

    psi: TemporalWavefunction
    psi_plus: TemporalWavefunction
    psi_minus: TemporalWavefunction


@dataclass(frozen=True)
class DetectionParams:
    duty_cycle_xi: float = 0.015
    efficiency_eta: float = 0.05
    acquisition_T: float = 1200.0
    bin_dt: float = 2e-9

    def __post_init__(self):
        for name in ("duty_cycle_xi", "efficiency_eta", "acquisition_T", "bin_dt"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be a finite positive number, got {value!r}")
        if self.efficiency_eta > 1:
            raise ConfigError(f"efficiency_eta must be <= 1, got {self.efficiency_eta!r}")
        if self.duty_cycle_xi > 1:
            raise ConfigError(f"duty_cycle_xi must be <= 1, got {self.duty_cycle_xi!r}")

    @property
    def prefactor(self) -> float:
        """xi * eta * T * dt."""
        return self.duty_cycle_xi * self.efficiency_eta * self.acquisition_T * self.bin_dt


@dataclass(frozen=True, eq=False)
class CoincidenceHistogram:
    tau: np.ndarray
    counts: np.ndarray
    bin_dt: float
    label: str = ""

    def __post_init__(self):
        tau = np.asarray(self.tau, dtype=float)
        counts = np.asarray(self.counts)
        if tau.shape != counts.shape or tau.ndim != 1:
            raise ConfigError("histogram bins and counts must be 1-d arrays of equal length")
        if np.any(counts < 0):
            raise ConfigError("histogram counts must be non-negative")
        if tau.size > 1 and not np.allclose(np.diff(tau), self.bin_dt, rtol=1e-6, atol=0):
            raise ConfigError("histogram bins must be uniform with spacing bin_dt")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "counts", counts)

    def same_bins(self, other: "CoincidenceHistogram") -> bool:
        return self.tau.shape == other.tau.shape and np.allclose(
            self.tau, other.tau, rtol=0, atol=1e-6 * self.bin_dt
        )


def symmetric_bins(tau_range: float, bin_dt: float) -> np.ndarray:
    """Bin centres m*bin_dt for |m*bin_dt| <= tau_range, exactly mirror symmetric."""
    m = int(np.floor(tau_range / bin_dt + 1e-9))
    return np.arange(-m, m + 1) * bin_dt


def build_spectral_amplitude(grid: SpectralGrid, medium: AtomicMedium, lasers: DriveLasers,
                             convention=PhaseMatchConvention.WITH_LENGTH) -> ComplexSpectrum:
    """Joint spectral amplitude kappa(varpi) * Phi(varpi) on ``grid``."""
    varpi = grid.samples
    try:
        values = coupling_kappa(varpi, medium, lasers) * phase_matching(varpi, medium, lasers, convention)
    except DomainError as exc:
        raise DomainError(f"{exc} [spectral grid index {exc.index}]", varpi=exc.varpi, index=exc.index) from exc
    return ComplexSpectrum(grid, values)


def temporal_wavefunction(spectrum: ComplexSpectrum, medium: AtomicMedium,
                          tau_range: Optional[float] = None) -> TemporalWavefunction:
    """psi(tau) = (L/2pi) * dvarpi * sum_j S_j exp(-i varpi_j tau) via one FFT.

    The FFT output lands on tau_m = (m - N/2) * 2pi/span. The unpaired sample
    at -N/2 is dropped so the returned grid is exactly mirror symmetric.
    """
    grid = spectrum.grid
    if tau_range is not None:
        grid.check_tau_range(tau_range)
    n = grid.n_points
    weights = medium.length_L / TWO_PI * grid.step * spectrum.values
    # ifftshift moves varpi = 0 to index 0, fftshift re-centres tau = 0
    psi = np.fft.fftshift(np.fft.fft(np.fft.ifftshift(weights)))
    tau = (np.arange(n) - n // 2) * grid.tau_step
    omega_first = float(grid.samples[0])

    def evaluate(t, _w=weights, _first=omega_first, _step=grid.step):
        return _dft_eval(_first, _step, _w, t)

    return TemporalWavefunction(tau[1:], psi[1:], medium.omega0, evaluator=evaluate)


def symmetrize(psi: TemporalWavefunction) -> SymmetrizedPair:
    """Bosonic and fermionic combinations by exact index mirroring."""
    if not psi.is_symmetric():
        raise ConfigError("symmetrize needs a tau grid symmetric about 0")
    mirrored = psi.values[::-1]
    plus = psi.values + mirrored
    minus = psi.values - mirrored

    def plus_at(t, _psi=psi):
        t = np.asarray(t, dtype=float)
        return _psi.at(t) + _psi.at(-t)

    def minus_at(t, _psi=psi):
        t = np.asarray(t, dtype=float)
        return _psi.at(t) - _psi.at(-t)

    return SymmetrizedPair(
        psi=psi,
        psi_plus=TemporalWavefunction(psi.tau, plus, psi.carrier_omega0, evaluator=plus_at),
        psi_minus=TemporalWavefunction(psi.tau, minus, psi.carrier_omega0, evaluator=minus_at),
    )


def _psi_and_mirror(psi: TemporalWavefunction, tau: np.ndarray):
    values = psi.at(tau)
    if np.array_equal(tau, -tau[::-1]):
        return values, values[::-1]
    return values, psi.at(-tau)


def coincidence_counts(pair: SymmetrizedPair, det: DetectionParams, sign: str = "+",
                       tau_bins=None, tau_range: float = DEFAULT_TAU_RANGE) -> CoincidenceHistogram:
    """C_pm(tau) = xi*eta*T*dt * |psi(tau) +- psi(-tau)|^2 at bin midpoints.

    On symmetric bins psi(-tau) is taken by reversing the evaluated array, so
    both C_+ and C_- are bit-identical under tau -> -tau.
    """
    if sign not in ("+", "-"):
        raise ConfigError(f"sign must be '+' or '-', got {sign!r}")
    tau = symmetric_bins(tau_range, det.bin_dt) if tau_bins is None else np.asarray(tau_bins, dtype=float)
    direct, mirrored = _psi_and_mirror(pair.psi, tau)
    amplitude = direct + mirrored if sign == "+" else direct - mirrored
    counts = det.prefactor * np.abs(amplitude) ** 2
    return CoincidenceHistogram(tau, counts, det.bin_dt, label=f"C{sign}")


@dataclass(frozen=True, eq=False)
class Prediction:
    """Everything one parameter set produces, for pipelines and reports."""

    spectrum: ComplexSpectrum
    pair: SymmetrizedPair
    c_plus: CoincidenceHistogram
    c_minus: CoincidenceHistogram


def predict(medium: AtomicMedium, lasers: DriveLasers, det: DetectionParams,
            grid: SpectralGrid = SpectralGrid(), convention=PhaseMatchConvention.WITH_LENGTH,
            tau_range: float = DEFAULT_TAU_RANGE) -> Prediction:
    spectrum = build_spectral_amplitude(grid, medium, lasers, convention)
    psi = temporal_wavefunction(spectrum, medium, tau_range=tau_range)
    pair = symmetrize(psi)
    return Prediction(
        spectrum,
        pair,
        coincidence_counts(pair, det, "+", tau_range=tau_range),
        coincidence_counts(pair, det, "-", tau_range=tau_range),
    )


def fwhm(hist: CoincidenceHistogram) -> float:
    """Full width between the outermost half-maximum crossings (linear interpolation).

    Multi-lobed profiles are measured by their envelope, so interior dips
    below half maximum do not shorten the width.
    """
    y = np.asarray(hist.counts, dtype=float)
    x = hist.tau
    peak = y.max()
    if peak <= 0:
        return 0.0
    half = peak / 2.0
    above = np.flatnonzero(y >= half)
    i, j = above[0], above[-1]
    left = x[i]
    if i > 0:
        left = x[i - 1] + (half - y[i - 1]) * (x[i] - x[i - 1]) / (y[i] - y[i - 1])
    right = x[j]
    if j < y.size - 1:
        right = x[j] + (y[j] - half) * (x[j + 1] - x[j]) / (y[j] - y[j + 1])
    return float(right - left)


def local_minima(hist: CoincidenceHistogram, below: float, window=(50e-9, 200e-9)) -> np.ndarray:
    """Bin centres of strict-left local minima with value < ``below`` * max, |tau| inside ``window``."""
    y = np.asarray(hist.counts, dtype=float)
    x = hist.tau
    lo, hi = window
    idx = np.arange(1, y.size - 1)
    is_min = (y[idx] < y[idx - 1]) & (y[idx] <= y[idx + 1])
    keep = is_min & (y[idx] < below * y.max()) & (np.abs(x[idx]) > lo) & (np.abs(x[idx]) < hi)
    return x[idx[keep]]
