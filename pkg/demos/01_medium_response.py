"""
Medium response of a cold-atom EIT cloud
========================================

Susceptibility, wavenumber and the pair-generation coupling across the
transparency window, for the OD = 7 and OD = 25 presets.
"""
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from biphoton import load_config
from biphoton.medium import TWO_PI, coupling_kappa, phase_matching, susceptibility, wavenumber_offset

FIGURES = Path(__file__).parent / "figures"
FIGURES.mkdir(exist_ok=True)

# %%
# Detuning axis in MHz, converted to rad/s for the library.
f_mhz = np.linspace(-40, 40, 2001)
varpi = TWO_PI * 1e6 * f_mhz

fig, axes = plt.subplots(2, 2, figsize=(10, 7), sharex=True)
for name in ("od7", "od25"):
    cfg = load_config(name)
    chi = susceptibility(varpi, cfg.medium, cfg.lasers)
    axes[0, 0].plot(f_mhz, chi.imag, label=f"{name}")
    axes[0, 1].plot(f_mhz, chi.real, label=f"{name}")
    # k - k0 is computed without cancellation, so the tiny dispersive shift is exact
    dk = wavenumber_offset(varpi, cfg.medium, cfg.lasers)
    axes[1, 0].plot(f_mhz, dk.real * cfg.medium.length_L, label=name)
    spectrum = coupling_kappa(varpi, cfg.medium, cfg.lasers) * phase_matching(varpi, cfg.medium, cfg.lasers)
    axes[1, 1].plot(f_mhz, np.abs(spectrum) ** 2 / np.max(np.abs(spectrum) ** 2), label=name)

    print(f"{name}: Im chi(0) = {susceptibility(0.0, cfg.medium, cfg.lasers).imag:.3e}, "
          f"peak Im chi = {chi.imag.max():.3e}")

axes[0, 0].set_ylabel("Im chi (absorption)")
axes[0, 1].set_ylabel("Re chi (dispersion)")
axes[1, 0].set_ylabel("(Re k - k0) L  [rad]")
axes[1, 1].set_ylabel("|kappa Phi|^2 (normalised)")
for ax in axes[1]:
    ax.set_xlabel("detuning varpi / 2pi [MHz]")
for ax in axes.flat:
    ax.legend()
fig.tight_layout()
fig.savefig(FIGURES / "01_medium_response.png", dpi=120)

# %%
# The coupling is dark without a pump and falls off as 1/Delta_p far from resonance.
cfg = load_config("od7")
print("kappa(0) =", coupling_kappa(0.0, cfg.medium, cfg.lasers))
