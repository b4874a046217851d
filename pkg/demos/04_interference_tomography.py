"""
Phase of the biphoton from time-resolved two-photon interference
================================================================

A delayed photon pair meets on a 50:50 beam splitter. Six polarisation
projections at each of two delays fix the phase difference of psi_+ across
the delay; integrating the differences gives phi(tau) up to a constant.
"""
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from biphoton import core, load_config
from biphoton import interferometer as itf

FIGURES = Path(__file__).parent / "figures"
FIGURES.mkdir(exist_ok=True)

cfg = load_config("od25")
det, delays = cfg.detection, cfg.tomography.delays
pred = core.predict(cfg.medium, cfg.lasers, det, cfg.grid, cfg.convention, cfg.tau_range)

battery = itf.measure_battery(pred.pair, det, delays)
amplitude = itf.pre_splitter_counts(pred.pair, det)
profile = itf.reconstruct_phase(battery, amplitude, det)
print(f"max |phi(tau) - phi(-tau)| = {itf.symmetry_error(profile):.2e} rad")
print("delay consistency:", {f"{k * 1e9:g} ns": f"{v:.1e}" for k, v in profile.consistency.items()})

fig, axes = plt.subplots(1, 3, figsize=(14, 4))
for (p3, p4), hist in zip(battery[1].settings, battery[1].histograms):
    axes[0].plot(hist.tau * 1e9, hist.counts, label=f"{p3.label}/{p4.label}")
axes[0].set_title(f"battery at delay {delays[1] * 1e9:g} ns")
axes[0].set_xlim(-200, 200)
axes[0].legend()
axes[1].plot(profile.tau * 1e9, profile.phi)
axes[1].set_title("reconstructed phase (native)")

# %%
# Round trip: strip the native phase, inject a known profile, reconstruct it.
truth = lambda t: 0.8 * np.cos(2 * np.pi * t / 30e-9)
injected = itf.inject_phase(pred.pair, truth, magnitude_only=True)
recovered = itf.reconstruct_phase(itf.measure_battery(injected, det, delays),
                                  itf.pre_splitter_counts(injected, det), det)
offset = np.nanmedian(recovered.phi - truth(np.abs(recovered.tau)))
axes[2].plot(recovered.tau * 1e9, truth(np.abs(recovered.tau)), label="injected")
axes[2].plot(recovered.tau * 1e9, recovered.phi - offset, "--", label="reconstructed")
axes[2].set_title("sinusoidal round trip")
axes[2].legend()
for ax in axes:
    ax.set_xlabel("tau [ns]")
fig.tight_layout()
fig.savefig(FIGURES / "04_interference_tomography.png", dpi=120)
