"""Vertical-scale fits of bosonic / fermionic coincidence models to count data."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .core import CoincidenceHistogram
from .errors import ConfigError, DegenerateModelError

VERDICTS = ("bosonic", "fermionic", "inconclusive")


@dataclass(frozen=True)
class FitReport:
    beta_plus: float
    beta_minus: float
    rss_plus: float
    rss_minus: float
    residual_ratio: float
    verdict: str
    n_bins_used: int
    threshold: float = 2.0
    clamped_plus: bool = False
    clamped_minus: bool = False
    weighted: bool = False

    def to_text(self) -> str:
        lines = []
        for key, value in asdict(self).items():
            if isinstance(value, bool):
                text = "true" if value else "false"
            elif isinstance(value, float):
                text = format(value, ".9g")
            else:
                text = str(value)
            lines.append(f"{key} = {text}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FitReport":
        raw = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            key, _, value = line.partition("=")
            raw[key.strip()] = value.strip()
        kwargs = {}
        for key, default in cls.__dataclass_fields__.items():
            if key not in raw:
                continue
            value = raw[key]
            if default.type in ("bool",):
                kwargs[key] = value == "true"
            elif default.type == "int":
                kwargs[key] = int(value)
            elif default.type == "str":
                kwargs[key] = value
            else:
                kwargs[key] = float(value)
        return cls(**kwargs)


def fit_window(model_plus: CoincidenceHistogram, tau_max: float = 400e-9,
               rel_floor: float = 1e-4) -> np.ndarray:
    """Bins with |tau| <= tau_max where the bosonic model exceeds rel_floor * peak."""
    counts = np.asarray(model_plus.counts, dtype=float)
    return (np.abs(model_plus.tau) <= tau_max) & (counts > rel_floor * counts.max())


def _check_bins(model: CoincidenceHistogram, data: CoincidenceHistogram):
    if not model.same_bins(data):
        raise ConfigError(
            f"model and data bins differ (model: {model.tau.size} bins of {model.bin_dt:g} s, "
            f"data: {data.tau.size} bins of {data.bin_dt:g} s)"
        )


def _raw_scale(model, data, mask, weighted):
    m = np.asarray(model.counts, dtype=float)
    d = np.asarray(data.counts, dtype=float)
    if mask is not None:
        m, d = m[mask], d[mask]
    if np.count_nonzero(m > 0) < 2:
        raise DegenerateModelError("model has fewer than 2 positive bins inside the fit window")
    if weighted:
        # Pearson weights 1/model: the weighted normal equation reduces to a ratio of sums
        used = m > 0
        beta = d[used].sum() / m[used].sum()
    else:
        beta = np.dot(m, d) / np.dot(m, m)
    return beta, m, d


def fit_beta(model: CoincidenceHistogram, data: CoincidenceHistogram,
             mask: Optional[np.ndarray] = None, weighted: bool = False):
    """Closed-form least-squares scale beta and its residual sum of squares.

    Returns ``(beta, rss)``. A negative optimum is clamped to 0.
    """
    _check_bins(model, data)
    beta, m, d = _raw_scale(model, data, mask, weighted)
    beta = max(beta, 0.0)
    rss = float(np.sum((d - beta * m) ** 2))
    return float(beta), rss


def synthesize_counts(model: CoincidenceHistogram, beta: float, background: float = 0.0,
                      seed: int = 0) -> CoincidenceHistogram:
    """Independent Poisson draws with mean beta*model + background per bin."""
    if beta < 0 or background < 0:
        raise ConfigError("beta and background must be non-negative")
    rng = np.random.default_rng(seed)
    lam = beta * np.asarray(model.counts, dtype=float) + background
    counts = rng.poisson(lam).astype(np.int64)
    return CoincidenceHistogram(model.tau, counts, model.bin_dt, label="synthetic")


def compare_models(c_plus: CoincidenceHistogram, c_minus: CoincidenceHistogram,
                   data: CoincidenceHistogram, threshold: float = 2.0,
                   mask: Optional[np.ndarray] = None, weighted: bool = False,
                   tau_max: float = 400e-9, rel_floor: float = 1e-4) -> FitReport:
    """Fit both symmetry hypotheses and pick the one with the smaller residual.

    ``mask`` defaults to :func:`fit_window` of ``c_plus``. The verdict is
    bosonic when rss_minus/rss_plus > threshold, fermionic when it is below
    1/threshold, inconclusive otherwise.
    """
    if threshold < 1:
        raise ConfigError(f"verdict threshold must be >= 1, got {threshold!r}")
    _check_bins(c_plus, data)
    _check_bins(c_minus, data)
    if mask is None:
        mask = fit_window(c_plus, tau_max, rel_floor)
    raw_plus = _raw_scale(c_plus, data, mask, weighted)[0]
    raw_minus = _raw_scale(c_minus, data, mask, weighted)[0]
    beta_plus, rss_plus = fit_beta(c_plus, data, mask, weighted)
    beta_minus, rss_minus = fit_beta(c_minus, data, mask, weighted)

    if rss_plus == 0 and rss_minus == 0:
        ratio = float("nan")
    elif rss_plus == 0:
        ratio = float("inf")
    else:
        ratio = rss_minus / rss_plus
    if ratio > threshold:
        verdict = "bosonic"
    elif ratio < 1.0 / threshold:
        verdict = "fermionic"
    else:
        verdict = "inconclusive"
    return FitReport(
        beta_plus=beta_plus,
        beta_minus=beta_minus,
        rss_plus=rss_plus,
        rss_minus=rss_minus,
        residual_ratio=ratio,
        verdict=verdict,
        n_bins_used=int(np.count_nonzero(mask)),
        threshold=float(threshold),
        clamped_plus=bool(raw_plus < 0),
        clamped_minus=bool(raw_minus < 0),
        weighted=weighted,
    )
