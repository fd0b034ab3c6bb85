"""Chain diagnostics: integrated autocorrelation time, ESS, acceptance curves."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import InsufficientDataError, ZeroVarianceError

log = logging.getLogger(__name__)

MIN_LENGTH = 10


@dataclass(frozen=True)
class AutocorrEstimate:
    tau: float
    rho: np.ndarray
    window: int


def normalized_autocorrelation(series) -> np.ndarray:
    """``rho(t) = N sum_{i<N-t} (f_i - mu)(f_{i+t} - mu) / ((N - t) sum_i (f_i - mu)^2)``.

    Computed for all lags ``0 <= t < N`` with a zero-padded FFT.
    """
    f = np.asarray(series, dtype=float).reshape(-1)
    n = f.size
    if n < MIN_LENGTH:
        raise InsufficientDataError(f"need at least {MIN_LENGTH} samples, got {n}")
    if not np.all(np.isfinite(f)):
        raise ValueError("series contains non-finite values")
    dev = f - f.mean()
    denom = float(dev @ dev)
    if denom <= 0.0 or denom < 1e-300:
        raise ZeroVarianceError("series has zero variance")
    size = 1 << int(2 * n - 1).bit_length()
    spec = np.fft.rfft(dev, n=size)
    acov = np.fft.irfft(spec * np.conj(spec), n=size)[:n]
    lags = np.arange(n)
    return n * acov / ((n - lags) * denom)


def autocorrelation_time(series, c: float = 5.0) -> AutocorrEstimate:
    """Integrated autocorrelation time ``tau = 1/2 + sum_{t>=1} rho(t)``.

    The sum is truncated at the smallest window ``W`` with ``W >= c * tau_W``.
    Estimates below ``1/2`` (anticorrelated chains) are clamped to ``1/2``.
    """
    rho = normalized_autocorrelation(series)
    n = rho.size
    taus = 0.5 + np.cumsum(rho[1:])  # taus[W-1] = tau_W
    windows = np.arange(1, n)
    ok = windows >= c * taus
    if ok.any():
        w = int(windows[np.argmax(ok)])
    else:
        w = n - 1
        log.info("autocorrelation window did not converge; chain may be too short (N=%d)", n)
    tau = max(0.5, float(taus[w - 1]))
    return AutocorrEstimate(tau=tau, rho=rho, window=w)


def effective_sample_size(series, c: float = 5.0) -> float:
    n = np.asarray(series).size
    return n / (2.0 * autocorrelation_time(series, c).tau)


def tau_vs_samples(series, sizes: Iterable[int], c: float = 5.0) -> list[tuple[int, float]]:
    """``tau`` estimated on growing prefixes of the chain."""
    f = np.asarray(series, dtype=float)
    return [(int(m), autocorrelation_time(f[:m], c).tau) for m in sizes]


@dataclass(frozen=True)
class AcceptanceRow:
    temperature: float
    mean: float
    std: float
    count: int


def acceptance_curve(groups: Mapping[float, Iterable]) -> list[AcceptanceRow]:
    """Mean and (population) std of per-repetition acceptance rates by temperature.

    Each group holds acceptance-flag arrays or objects exposing ``accepted``.
    """
    rows = []
    for temp in sorted(groups):
        rates = []
        for item in groups[temp]:
            flags = np.asarray(getattr(item, "accepted", item), dtype=float)
            if flags.size:
                rates.append(flags.mean())
        if not rates:
            log.warning("no acceptance data at temperature %g; skipping", temp)
            continue
        rates = np.asarray(rates)
        rows.append(AcceptanceRow(float(temp), float(rates.mean()), float(rates.std()), len(rates)))
    return rows
