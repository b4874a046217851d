"""
Config-driven pipelines from the command line
=============================================

The ``biphoton`` command wraps every capability above. This script drives
it in-process with the shipped presets and inspects the files it writes.
"""
from pathlib import Path

import numpy as np

from biphoton.cli import main
from biphoton.config import preset_text

out = Path(__file__).parent / "figures" / "cli_run"
print(preset_text("od7").splitlines()[0])

# Equivalent shell commands:
#   biphoton simulate --config od7 --out figures/cli_run/simulate
#   biphoton fit --config od7 --data figures/cli_run/simulate/synthetic_counts.csv
#   biphoton tomography --config od25 --out figures/cli_run/tomography
#   biphoton sweep --config od7 --param optical_depth --values 5,7,15,25
assert main(["simulate", "--config", "od7", "--out", str(out / "simulate")]) == 0
assert main(["fit", "--config", "od7", "--data", str(out / "simulate" / "synthetic_counts.csv"),
             "--out", str(out / "fit")]) == 0
print((out / "fit" / "fit_report.txt").read_text())

assert main(["tomography", "--config", "od25", "--out", str(out / "tomography")]) == 0
print((out / "tomography" / "symmetry_report.txt").read_text())

assert main(["sweep", "--config", "od7", "--param", "optical_depth", "--values", "5,7,15,25",
             "--out", str(out / "sweep")]) == 0
summary = np.loadtxt(out / "sweep" / "summary.csv", delimiter=",", skiprows=1)
for value, width, peak, n_minima in summary:
    print(f"OD {value:5.1f}: FWHM {width:6.1f} ns, peak {peak:7.0f}, deep C- minima {int(n_minima)}")
