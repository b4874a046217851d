"""
Command-line pipelines: simulate, fit, tomography, sweep.

Exit codes: 0 success, 2 configuration error, 3 physics-domain error,
4 I/O error. All delays in output files are in nanoseconds.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import core, fitting, interferometer
from .config import RunConfig, load_config, parse_quantity
from .errors import ConfigError, DegenerateModelError, DomainError, ReconstructionError
from .medium import PhaseMatchConvention

log = logging.getLogger("biphoton")

FLOAT_FMT = "%.9g"
SWEEP_PARAMETERS = {
    "optical_depth": "medium",
    "omega_c_rabi": "lasers",
    "delta_p": "lasers",
}


def _write_csv(path: Path, header: Sequence[str], columns) -> Path:
    data = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, data, fmt=FLOAT_FMT, delimiter=",", header=",".join(header), comments="")
    return path


def _write_report(path: Path, items) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for key, value in items:
        text = format(value, ".9g") if isinstance(value, float) else str(value)
        lines.append(f"{key} = {text}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _predict(cfg: RunConfig) -> core.Prediction:
    return core.predict(cfg.medium, cfg.lasers, cfg.detection, cfg.grid, cfg.convention, cfg.tau_range)


def _write_counts(path: Path, prediction: core.Prediction) -> Path:
    return _write_csv(path, ("tau_ns", "c_plus", "c_minus"),
                      (prediction.c_plus.tau * 1e9, prediction.c_plus.counts, prediction.c_minus.counts))


def run_simulate(cfg: RunConfig, out: Optional[Path] = None) -> List[Path]:
    """psi.csv, counts.csv and a seeded Poisson sample synthetic_counts.csv."""
    out = Path(out or cfg.output_dir)
    prediction = _predict(cfg)
    if cfg.lasers.omega_p_rabi == 0:
        log.warning("omega_p_rabi = 0: no pairs are generated, all counts are zero")

    pair = prediction.pair
    keep = np.abs(pair.psi.tau) <= cfg.tau_range
    psi, plus, minus = pair.psi.values[keep], pair.psi_plus.values[keep], pair.psi_minus.values[keep]
    written = [
        _write_csv(out / "psi.csv",
                   ("tau_ns", "re_psi", "im_psi", "abs_psi", "re_psi_plus", "im_psi_plus",
                    "re_psi_minus", "im_psi_minus"),
                   (pair.psi.tau[keep] * 1e9, psi.real, psi.imag, np.abs(psi),
                    plus.real, plus.imag, minus.real, minus.imag)),
        _write_counts(out / "counts.csv", prediction),
    ]
    synthetic = fitting.synthesize_counts(prediction.c_plus, cfg.synth_beta, cfg.background, cfg.seed)
    written.append(_write_csv(out / "synthetic_counts.csv", ("tau_ns", "counts"),
                              (synthetic.tau * 1e9, synthetic.counts)))
    return written


def read_histogram(path: Path, bin_dt: float) -> core.CoincidenceHistogram:
    """Read (tau_ns, counts[, ...]) rows; extra columns are ignored."""
    taus, counts = [], []
    with open(path, newline="", encoding="utf-8") as handle:
        for row_number, row in enumerate(csv.reader(handle), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            try:
                tau, value = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                if row_number == 1:
                    continue  # header
                raise ConfigError(f"{path}: malformed data row {row_number}: {','.join(row)!r}") from None
            if not (np.isfinite(tau) and np.isfinite(value)) or value < 0:
                raise ConfigError(f"{path}: invalid values in data row {row_number}")
            taus.append(tau * 1e-9)
            counts.append(value)
    if len(taus) < 2:
        raise ConfigError(f"{path}: need at least two data rows")
    tau = np.asarray(taus)
    widths = np.diff(tau)
    if not np.allclose(widths, bin_dt, rtol=1e-6, atol=1e-15):
        raise ConfigError(
            f"incompatible binning: data bins are {np.median(widths) * 1e9:g} ns wide, "
            f"configuration bin_dt is {bin_dt * 1e9:g} ns"
        )
    # rebuild bin centres on the configured spacing to drop text rounding
    tau = tau[0] + np.arange(tau.size) * bin_dt
    return core.CoincidenceHistogram(tau, np.asarray(counts), bin_dt, label="data")


def run_fit(cfg: RunConfig, data_path: Path, out: Optional[Path] = None) -> Path:
    out = Path(out or cfg.output_dir)
    data = read_histogram(Path(data_path), cfg.detection.bin_dt)
    spectrum = core.build_spectral_amplitude(cfg.grid, cfg.medium, cfg.lasers, cfg.convention)
    pair = core.symmetrize(core.temporal_wavefunction(spectrum, cfg.medium))
    c_plus = core.coincidence_counts(pair, cfg.detection, "+", tau_bins=data.tau)
    c_minus = core.coincidence_counts(pair, cfg.detection, "-", tau_bins=data.tau)
    report = fitting.compare_models(
        c_plus, c_minus, data, threshold=cfg.fit.threshold, weighted=cfg.fit.weighted,
        tau_max=cfg.fit.tau_max, rel_floor=cfg.fit.rel_floor,
    )
    path = out / "fit_report.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.to_text(), encoding="utf-8")
    return path


def _zero_phase(t):
    return np.zeros_like(np.asarray(t, dtype=float))


def run_tomography(cfg: RunConfig, out: Optional[Path] = None) -> List[Path]:
    out = Path(out or cfg.output_dir)
    det = cfg.detection
    pair = _predict(cfg).pair
    if cfg.tomography.zero_phase:
        pair = interferometer.inject_phase(pair, _zero_phase, magnitude_only=True)
    amplitude = interferometer.pre_splitter_counts(pair, det, tau_range=cfg.tau_range)
    measurements = interferometer.measure_battery(pair, det, cfg.tomography.delays, tau_range=cfg.tau_range)
    profile = interferometer.reconstruct_phase(measurements, amplitude, det, cfg.tomography.mask_fraction)

    written = [_write_csv(out / "amplitude.csv", ("tau_ns", "counts"), (amplitude.tau * 1e9, amplitude.counts))]
    index = 0
    for meas in measurements:
        for (p3, p4), hist in zip(meas.settings, meas.histograms):
            index += 1
            name = f"setting_{index:02d}_dt{meas.delay_dt * 1e9:g}ns_{p3.label}{p4.label}.csv"
            written.append(_write_csv(out / "battery" / name, ("tau_ns", "counts"), (hist.tau * 1e9, hist.counts)))
    written.append(_write_csv(out / "phase.csv", ("tau_ns", "phi_rad", "mask"),
                              (profile.tau * 1e9, profile.phi, profile.mask.astype(int))))
    items = [
        ("max_asymmetry_rad", interferometer.symmetry_error(profile)),
        ("mask_bins", int(profile.mask.sum())),
        ("step_delay_ns", profile.step_delay * 1e9),
        ("n_settings", index),
    ]
    for delay, discrepancy in sorted(profile.consistency.items()):
        items.append((f"consistency_dt{delay * 1e9:g}ns_rad", discrepancy))
    written.append(_write_report(out / "symmetry_report.txt", items))
    return written


def _with_parameter(cfg: RunConfig, parameter: str, value: float) -> RunConfig:
    section = SWEEP_PARAMETERS[parameter]
    updated = dataclasses.replace(getattr(cfg, section), **{parameter: value})
    return dataclasses.replace(cfg, **{section: updated})


def run_sweep(cfg: RunConfig, parameter: str, values: Sequence[float], out: Optional[Path] = None) -> Path:
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError(f"unknown sweep parameter {parameter!r}; choose from {', '.join(SWEEP_PARAMETERS)}")
    values = list(values)
    if not values:
        raise ConfigError("sweep needs at least one value")
    out = Path(out or cfg.output_dir)
    rows = []
    for i, value in enumerate(values):
        prediction = _predict(_with_parameter(cfg, parameter, float(value)))
        _write_counts(out / f"counts_{parameter}_{i:02d}.csv", prediction)
        minima = core.local_minima(prediction.c_minus, below=0.05)
        rows.append((float(value), core.fwhm(prediction.c_plus) * 1e9,
                     float(prediction.c_plus.counts.max()), minima.size))
    return _write_csv(out / "summary.csv",
                      ("value", "fwhm_c_plus_ns", "peak_c_plus", "n_c_minus_oscillation_minima"),
                      list(zip(*rows)))


def _parse_values(text: str) -> List[float]:
    return [parse_quantity(item) for item in text.split(",") if item.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None,
                        help="configuration file or preset name (od7, od25); defaults apply when omitted")
    common.add_argument("--out", default=None, help="output directory (overrides [run] output_dir)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--convention", choices=[c.value for c in PhaseMatchConvention], default=None)

    parser = argparse.ArgumentParser(prog="biphoton", description=__doc__.splitlines()[1])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="wavefunction and coincidence histograms")
    fit = sub.add_parser("fit", parents=[common], help="fit beta_+/- to measured counts")
    fit.add_argument("--data", required=True, help="CSV with columns tau_ns,counts")
    tomo = sub.add_parser("tomography", parents=[common], help="interference battery and phase reconstruction")
    tomo.add_argument("--zero-phase", action="store_true", help="strip the wavefunction phase before measuring")
    sweep = sub.add_parser("sweep", parents=[common], help="repeat simulate over one parameter")
    sweep.add_argument("--param", required=True, choices=sorted(SWEEP_PARAMETERS))
    sweep.add_argument("--values", required=True, help="comma-separated list, unit suffixes allowed")
    return parser


def _resolve_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.convention is not None:
        overrides["convention"] = PhaseMatchConvention(args.convention)
    if getattr(args, "zero_phase", False):
        overrides["tomography"] = dataclasses.replace(cfg.tomography, zero_phase=True)
    return dataclasses.replace(cfg, **overrides) if overrides else cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
        out = Path(args.out) if args.out else None
        if args.command == "simulate":
            paths = run_simulate(cfg, out)
        elif args.command == "fit":
            paths = [run_fit(cfg, Path(args.data), out)]
        elif args.command == "tomography":
            paths = run_tomography(cfg, out)
        else:
            values = _parse_values(args.values)
            if not values:
                raise ConfigError("--values must list at least one value")
            paths = [run_sweep(cfg, args.param, values, out)]
    except (ConfigError, DegenerateModelError, ReconstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"physics error in {args.command}: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4
    for path in paths:
        log.info("wrote %s", path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
