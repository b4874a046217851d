"""
INI-style run configuration with unit suffixes.

Every physical value may carry one of the suffixes in ``UNITS``; bare
numbers are read as SI (rad/s, s, m, rad). ``serialize_config`` writes
bare SI values with full precision so parsing its output reproduces the
configuration exactly.
"""
from __future__ import annotations

import configparser
import dataclasses
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, Tuple

import numpy as np

from .core import DEFAULT_TAU_RANGE, DetectionParams, SpectralGrid
from .errors import ConfigError
from .medium import AtomicMedium, DriveLasers, PhaseMatchConvention

TWO_PI = 2.0 * np.pi

UNITS: Dict[str, float] = {
    "": 1.0,
    "rad/s": 1.0,
    "Hz_x2pi": TWO_PI,
    "kHz_x2pi": TWO_PI * 1e3,
    "MHz_x2pi": TWO_PI * 1e6,
    "GHz_x2pi": TWO_PI * 1e9,
    "s": 1.0,
    "ms": 1e-3,
    "us": 1e-6,
    "ns": 1e-9,
    "ps": 1e-12,
    "m": 1.0,
    "cm": 1e-2,
    "mm": 1e-3,
    "um": 1e-6,
    "nm": 1e-9,
    "1/m": 1.0,
    "rad": 1.0,
    "deg": np.pi / 180.0,
    "%": 1e-2,
}

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|[-+]?inf|nan)\s*([A-Za-z%/_0-9]*)\s*$")


@dataclass(frozen=True)
class FitOptions:
    tau_max: float = 400e-9
    rel_floor: float = 1e-4
    threshold: float = 2.0
    weighted: bool = False


@dataclass(frozen=True)
class TomographyOptions:
    delays: Tuple[float, ...] = (1.0e-9, 5.8e-9)
    mask_fraction: float = 0.05
    zero_phase: bool = False


@dataclass(frozen=True)
class RunConfig:
    medium: AtomicMedium = field(default_factory=AtomicMedium)
    lasers: DriveLasers = field(default_factory=DriveLasers)
    detection: DetectionParams = field(default_factory=DetectionParams)
    grid: SpectralGrid = field(default_factory=SpectralGrid)
    convention: PhaseMatchConvention = PhaseMatchConvention.WITH_LENGTH
    tau_range: float = DEFAULT_TAU_RANGE
    seed: int = 42
    output_dir: str = "output"
    synth_beta: float = 1.0
    background: float = 0.0
    fit: FitOptions = field(default_factory=FitOptions)
    tomography: TomographyOptions = field(default_factory=TomographyOptions)

    def __post_init__(self):
        self.grid.check_tau_range(self.tau_range)
        if self.tau_range <= 0:
            raise ConfigError("tau_range must be positive")
        if self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")
        if self.synth_beta < 0 or self.background < 0:
            raise ConfigError("synth_beta and background must be non-negative")
        if self.fit.threshold < 1:
            raise ConfigError("fit threshold must be >= 1")
        if not self.tomography.delays or any(d <= 0 for d in self.tomography.delays):
            raise ConfigError("tomography delays must be a non-empty list of positive delays")
        if not 0 < self.tomography.mask_fraction < 1:
            raise ConfigError("tomography mask_fraction must lie in (0, 1)")


# section -> (target attribute on RunConfig or None for top level, {key: kind})
_SCHEMA = {
    "medium": ("medium", {f.name: "float" for f in dataclasses.fields(AtomicMedium)}),
    "lasers": ("lasers", {f.name: "float" for f in dataclasses.fields(DriveLasers)}),
    "detection": ("detection", {f.name: "float" for f in dataclasses.fields(DetectionParams)}),
    "grid": ("grid", {"n_points": "int", "span": "float"}),
    "run": (None, {"convention": "convention", "tau_range": "float", "seed": "int",
                   "output_dir": "str", "synth_beta": "float", "background": "float"}),
    "fit": ("fit", {"tau_max": "float", "rel_floor": "float", "threshold": "float", "weighted": "bool"}),
    "tomography": ("tomography", {"delays": "floats", "mask_fraction": "float", "zero_phase": "bool"}),
}


def parse_quantity(text: str) -> float:
    """'20.7 MHz_x2pi' -> 2*pi*20.7e6; '1.5 cm' -> 0.015; '7' -> 7.0."""
    match = _QUANTITY.match(text)
    if not match:
        raise ConfigError(f"cannot parse quantity {text!r}")
    number, unit = match.groups()
    if unit not in UNITS:
        raise ConfigError(f"unknown unit {unit!r} in {text!r}; known: {', '.join(u for u in UNITS if u)}")
    return float(number) * UNITS[unit]


def _convert(kind: str, raw: str):
    if kind == "float":
        return parse_quantity(raw)
    if kind == "int":
        value = parse_quantity(raw)
        if value != int(value):
            raise ConfigError(f"expected an integer, got {raw!r}")
        return int(value)
    if kind == "bool":
        lowered = raw.strip().lower()
        if lowered in ("true", "yes", "on", "1"):
            return True
        if lowered in ("false", "no", "off", "0"):
            return False
        raise ConfigError(f"expected a boolean, got {raw!r}")
    if kind == "floats":
        items = [item for item in raw.split(",") if item.strip()]
        return tuple(parse_quantity(item) for item in items)
    if kind == "convention":
        try:
            return PhaseMatchConvention(raw.strip().lower())
        except ValueError:
            raise ConfigError(f"convention must be 'with-length' or 'as-printed', got {raw!r}") from None
    return raw.strip()


def _line_numbers(text: str) -> Dict[Tuple[str, str], int]:
    where = {}
    section = None
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1].strip()
        elif section and ("=" in stripped or ":" in stripped) and not stripped.startswith(("#", ";")):
            key = re.split(r"[=:]", stripped, maxsplit=1)[0].strip()
            where[(section, key)] = number
    return where


def parse_config(text: str) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.ParsingError as exc:
        lineno, line = exc.errors[0]
        raise ConfigError(f"configuration parse error (line {lineno}): cannot read {line.strip()!r}") from exc
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", None)
        where = f" (line {lineno})" if lineno else ""
        raise ConfigError(f"configuration parse error{where}: {exc.message}") from exc
    lines = _line_numbers(text)

    values: Dict[str, Dict[str, object]] = {name: {} for name in _SCHEMA}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        kinds = _SCHEMA[section][1]
        for key, raw in parser.items(section):
            if key not in kinds:
                line = lines.get((section, key))
                raise ConfigError(f"unknown key '{key}' in [{section}]" + (f" (line {line})" if line else ""))
            try:
                values[section][key] = _convert(kinds[key], raw)
            except ConfigError as exc:
                line = lines.get((section, key))
                raise ConfigError(f"[{section}] {key}: {exc}" + (f" (line {line})" if line else "")) from None

    try:
        top = dict(values["run"])
        return RunConfig(
            medium=AtomicMedium(**values["medium"]),
            lasers=DriveLasers(**values["lasers"]),
            detection=DetectionParams(**values["detection"]),
            grid=SpectralGrid(**values["grid"]),
            fit=FitOptions(**values["fit"]),
            tomography=TomographyOptions(**values["tomography"]),
            **top,
        )
    except ConfigError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from None


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, PhaseMatchConvention):
        return value.value
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_config(cfg: RunConfig) -> str:
    out = []
    for section, (attr, kinds) in _SCHEMA.items():
        source = cfg if attr is None else getattr(cfg, attr)
        out.append(f"[{section}]")
        for key in kinds:
            out.append(f"{key} = {_format(getattr(source, key))}")
        out.append("")
    return "\n".join(out)


def load_config(path) -> RunConfig:
    """Read a configuration file, or a shipped preset by name ('od7', 'od25')."""
    path = Path(path)
    if not path.exists() and path.suffix == "" and path.name in preset_names():
        return parse_config(preset_text(path.name))
    return parse_config(path.read_text(encoding="utf-8"))


def preset_names():
    return sorted(p.name[:-4] for p in resources.files("biphoton.presets").iterdir() if p.name.endswith(".cfg"))


def preset_text(name: str) -> str:
    return resources.files("biphoton.presets").joinpath(f"{name}.cfg").read_text(encoding="utf-8")
