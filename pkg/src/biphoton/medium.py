"""
Frequency-domain optical response of a driven three-level (Lambda) medium.

All frequencies are angular frequencies in rad/s, lengths in meters. The
detuning argument ``varpi`` is the anti-Stokes offset from the degenerate
carrier; the Stokes photon sits at ``-varpi``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .errors import ConfigError, DomainError

if TYPE_CHECKING:
    from .core import SpectralGrid

TWO_PI = 2.0 * np.pi


def mhz(value: float) -> float:
    """Angular frequency for ``value`` MHz, i.e. 2*pi*value*1e6 rad/s."""
    return TWO_PI * value * 1e6


class PhaseMatchConvention(str, enum.Enum):
    """How the pump/coupling mismatch enters the phase-matching sinc.

    ``WITH_LENGTH`` multiplies (k_p - k_c) cos(theta) by the medium length so
    the sinc argument is dimensionless. ``AS_PRINTED`` adds the bare
    wavenumber difference.
    """

    WITH_LENGTH = "with-length"
    AS_PRINTED = "as-printed"


@dataclass(frozen=True)
class AtomicMedium:
    optical_depth: float = 7.0
    length_L: float = 0.015
    gamma13: float = mhz(6.0)
    gamma12: float = mhz(0.025)
    delta12: float = TWO_PI * 3.04e9
    carrier_wavelength: float = 795e-9
    dipole_ratio: float = 1.0

    def __post_init__(self):
        for name in ("optical_depth", "length_L", "gamma13", "carrier_wavelength", "dipole_ratio"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be a finite positive number, got {value!r}")
        if not (np.isfinite(self.gamma12) and self.gamma12 >= 0):
            raise ConfigError(f"gamma12 must be finite and >= 0, got {self.gamma12!r}")
        if not np.isfinite(self.delta12):
            raise ConfigError(f"delta12 must be finite, got {self.delta12!r}")

    @property
    def k0(self) -> float:
        return TWO_PI / self.carrier_wavelength

    @property
    def omega0(self) -> float:
        return TWO_PI * SPEED_OF_LIGHT / self.carrier_wavelength


@dataclass(frozen=True)
class DriveLasers:
    omega_p_rabi: float = mhz(88.8)
    omega_c_rabi: float = mhz(20.7)
    delta_p: float = TWO_PI * 3.04e9
    theta: float = np.deg2rad(5.0)
    # k_p - k_c in 1/m; zero at the degenerate operating point by default
    pump_coupling_wavenumber_diff: float = 0.0

    def __post_init__(self):
        # omega_c_rabi == 0 is accepted so the two-level limit stays reachable
        if not (np.isfinite(self.omega_c_rabi) and self.omega_c_rabi >= 0):
            raise ConfigError(f"omega_c_rabi must be finite and >= 0, got {self.omega_c_rabi!r}")
        if not (np.isfinite(self.omega_p_rabi) and self.omega_p_rabi >= 0):
            raise ConfigError(f"omega_p_rabi must be finite and >= 0, got {self.omega_p_rabi!r}")
        if not np.isfinite(self.delta_p):
            raise ConfigError(f"delta_p must be finite, got {self.delta_p!r}")
        if not (0.0 <= self.theta < np.pi / 2):
            raise ConfigError(f"theta must lie in [0, pi/2), got {self.theta!r}")
        if not np.isfinite(self.pump_coupling_wavenumber_diff):
            raise ConfigError("pump_coupling_wavenumber_diff must be finite")


@dataclass(frozen=True, eq=False)
class ComplexSpectrum:
    """Complex samples on a :class:`~biphoton.core.SpectralGrid`."""

    grid: "SpectralGrid"
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n_points,):
            raise ConfigError(
                f"spectrum has {values.shape} samples, grid expects {self.grid.n_points}"
            )
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise DomainError(f"non-finite spectrum sample at grid index {bad}", index=bad)
        object.__setattr__(self, "values", values)


def _check_finite(result, varpi, what):
    result = np.asarray(result)
    finite = np.isfinite(result)
    if np.all(finite):
        return
    if result.ndim == 0:
        raise DomainError(f"{what} is not finite at varpi={float(varpi)!r} rad/s", varpi=float(varpi))
    index = int(np.flatnonzero(~finite.ravel())[0])
    w = float(np.broadcast_to(varpi, result.shape).ravel()[index])
    raise DomainError(
        f"{what} is not finite at varpi={w!r} rad/s (index {index})", varpi=w, index=index
    )


def eit_denominator(varpi, medium: AtomicMedium, lasers: DriveLasers):
    """D(varpi) = |Omega_c|^2 - 4 (varpi + i gamma13)(varpi + i gamma12)."""
    varpi = np.asarray(varpi, dtype=float)
    return lasers.omega_c_rabi**2 - 4.0 * (varpi + 1j * medium.gamma13) * (varpi + 1j * medium.gamma12)


def susceptibility(varpi, medium: AtomicMedium, lasers: DriveLasers):
    """Linear EIT susceptibility chi(varpi) seen by a photon at detuning varpi."""
    varpi = np.asarray(varpi, dtype=float)
    prefactor = 4.0 * medium.optical_depth * medium.gamma13 / (medium.k0 * medium.length_L)
    with np.errstate(divide="ignore", invalid="ignore"):
        chi = prefactor * (varpi + 1j * medium.gamma12) / eit_denominator(varpi, medium, lasers)
    _check_finite(chi, varpi, "susceptibility")
    return chi[()] if chi.ndim == 0 else chi


def wavenumber_offset(varpi, medium: AtomicMedium, lasers: DriveLasers):
    """k(varpi) - k0, evaluated without cancellation.

    Uses k0*chi / (1 + sqrt(1 + chi)), algebraically identical to
    k0*(sqrt(1 + chi) - 1) but exact to rounding for |chi| << 1.
    """
    chi = np.asarray(susceptibility(varpi, medium, lasers))
    out = medium.k0 * chi / (1.0 + np.sqrt(1.0 + chi))
    return out[()] if out.ndim == 0 else out


def wavenumber(varpi, medium: AtomicMedium, lasers: DriveLasers):
    """k(varpi) = k0 sqrt(1 + chi(varpi)) on the principal branch (Re >= 0)."""
    chi = np.asarray(susceptibility(varpi, medium, lasers))
    out = medium.k0 * np.sqrt(1.0 + chi)
    return out[()] if out.ndim == 0 else out


def coupling_kappa(varpi, medium: AtomicMedium, lasers: DriveLasers):
    """Nonlinear coupling coefficient kappa(varpi) in 1/m."""
    varpi = np.asarray(varpi, dtype=float)
    numerator = (
        -1j * lasers.omega_p_rabi * lasers.omega_c_rabi * medium.gamma13
        * medium.optical_depth * medium.dipole_ratio / (2.0 * medium.length_L)
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        kappa = numerator / (
            (lasers.delta_p + 1j * medium.gamma13) * eit_denominator(varpi, medium, lasers)
        )
    _check_finite(kappa, varpi, "coupling_kappa")
    return kappa[()] if kappa.ndim == 0 else kappa


def sinc(x):
    """Unnormalised sinc, sin(x)/x with sinc(0) = 1; accepts complex input."""
    x = np.asarray(x)
    safe = np.where(x == 0, 1.0, x)
    out = np.where(x == 0, 1.0, np.sin(safe) / safe)
    return out[()] if out.ndim == 0 else out


def mismatch_term(medium: AtomicMedium, lasers: DriveLasers, convention=PhaseMatchConvention.WITH_LENGTH):
    convention = PhaseMatchConvention(convention)
    term = lasers.pump_coupling_wavenumber_diff * np.cos(lasers.theta)
    if convention is PhaseMatchConvention.WITH_LENGTH:
        term *= medium.length_L
    return term


def phase_matching(varpi, medium: AtomicMedium, lasers: DriveLasers,
                   convention=PhaseMatchConvention.WITH_LENGTH):
    """Phase-matching function Phi(varpi) for the counter-propagating pair.

    The common k0*L phase is factored out and applied separately so the
    dispersive parts keep full precision.
    """
    varpi = np.asarray(varpi, dtype=float)
    L = medium.length_L
    dk_as = np.asarray(wavenumber_offset(varpi, medium, lasers))
    dk_s = np.asarray(wavenumber_offset(-varpi, medium, lasers))
    argument = ((dk_as - dk_s) * L + mismatch_term(medium, lasers, convention)) / 2.0
    carrier = np.exp(1j * medium.k0 * L)
    out = sinc(argument) * carrier * np.exp(0.5j * (dk_as + dk_s) * L)
    _check_finite(out, varpi, "phase_matching")
    return out[()] if out.ndim == 0 else out
