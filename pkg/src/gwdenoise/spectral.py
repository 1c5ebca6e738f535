"""Welch PSD/ASD estimation and SNR metrics in dB.

The PSD estimator is Welch's averaged periodogram with a Hann window,
per-segment mean removal and one-sided density normalization, so the
integral of the PSD over frequency approximates the signal variance.

SNR metrics are explicit power ratios: ``residual_snr_db`` compares the
processed output against the input-output residual, ``oracle_snr_db``
compares a known clean signal against the estimation error, and
``snr_gain_db`` is the oracle improvement from input to output. Saturated
ratios are reported as +/-inf sentinels rather than exceptions so pipelines
can print them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import signal

from .detector import StrainSeries
from .errors import DataError

SPECTRUM_CSV_HEADER = "freq_hz,psd,asd"


@dataclass(frozen=True, eq=False)
class Spectrum:
    """One-sided PSD/ASD on a uniform frequency grid from 0 to Nyquist."""

    freqs: np.ndarray
    psd: np.ndarray
    asd: np.ndarray
    segment_length: int | None = None
    overlap: float | None = None
    window: str | None = None

    def __post_init__(self) -> None:
        if len(self.freqs) != len(self.psd) or len(self.psd) != len(self.asd):
            raise ValueError("freqs, psd, asd must have equal lengths")
        if np.any(self.psd < 0):
            raise ValueError("psd must be non-negative")


def welch_asd(
    series: StrainSeries,
    segment_seconds: float = 1.0,
    overlap_fraction: float = 0.5,
) -> Spectrum:
    """
    Welch estimate of the one-sided PSD and ASD.

    Parameters
    ----------
    series
        Input strain; must contain at least one full segment.
    segment_seconds
        Segment duration; the segment length is round(segment_seconds * fs).
    overlap_fraction
        Fractional overlap between consecutive segments, in [0, 1).
    """
    if not 0.0 <= overlap_fraction < 1.0:
        raise ValueError(f"overlap_fraction must lie in [0, 1), got {overlap_fraction}")
    fs = series.sample_rate
    nperseg = int(round(segment_seconds * fs))
    if nperseg < 2:
        raise ValueError(f"segment of {segment_seconds} s holds fewer than 2 samples at {fs} Hz")
    if len(series.values) < nperseg:
        raise ValueError(
            f"series of {len(series.values)} samples is shorter than one "
            f"segment ({nperseg} samples)"
        )
    freqs, psd = signal.welch(
        series.values,
        fs=fs,
        window="hann",
        nperseg=nperseg,
        noverlap=int(nperseg * overlap_fraction),
        detrend="constant",
        return_onesided=True,
        scaling="density",
    )
    psd = np.maximum(psd, 0.0)
    return Spectrum(
        freqs=freqs,
        psd=psd,
        asd=np.sqrt(psd),
        segment_length=nperseg,
        overlap=overlap_fraction,
        window="hann",
    )


def _mean_square(values: np.ndarray) -> float:
    return float(np.mean(np.square(values)))


def _check_equal_lengths(a: StrainSeries, b: StrainSeries) -> None:
    if len(a.values) != len(b.values):
        raise ValueError(f"series lengths differ: {len(a.values)} vs {len(b.values)}")


def residual_snr_db(input_series: StrainSeries, output_series: StrainSeries) -> float:
    """
    10*log10(P(output) / P(input - output)) with P the mean square.

    Zero residual saturates to +inf; zero output power to -inf.
    """
    _check_equal_lengths(input_series, output_series)
    p_out = _mean_square(output_series.values)
    p_res = _mean_square(input_series.values - output_series.values)
    if p_res == 0.0:
        return math.inf
    if p_out == 0.0:
        return -math.inf
    return 10.0 * math.log10(p_out / p_res)


def oracle_snr_db(clean: StrainSeries, estimate: StrainSeries) -> float:
    """
    10*log10(P(clean) / P(estimate - clean)); requires nonzero clean power.

    A perfect estimate saturates to +inf.
    """
    _check_equal_lengths(clean, estimate)
    p_clean = _mean_square(clean.values)
    if p_clean == 0.0:
        raise ValueError("clean reference has zero power")
    p_err = _mean_square(estimate.values - clean.values)
    if p_err == 0.0:
        return math.inf
    return 10.0 * math.log10(p_clean / p_err)


def snr_gain_db(clean: StrainSeries, noisy_input: StrainSeries, denoised: StrainSeries) -> float:
    """Oracle SNR improvement of the denoised output over the noisy input."""
    return oracle_snr_db(clean, denoised) - oracle_snr_db(clean, noisy_input)


def write_spectrum_csv(spectrum: Spectrum, path: str | Path) -> None:
    """CSV with header ``freq_hz,psd,asd`` and 17-significant-digit values."""
    lines = [SPECTRUM_CSV_HEADER]
    for f, p, a in zip(spectrum.freqs, spectrum.psd, spectrum.asd):
        lines.append(f"{f:.17g},{p:.17g},{a:.17g}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_spectrum_csv(path: str | Path) -> Spectrum:
    """Parse a spectrum CSV written by :func:`write_spectrum_csv`."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != SPECTRUM_CSV_HEADER:
        raise DataError(f"{path}: expected header {SPECTRUM_CSV_HEADER!r}")
    freqs, psd, asd = [], [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise DataError(f"{path}:{lineno}: expected 3 comma-separated values")
        try:
            f, p, a = (float(v) for v in parts)
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: bad value: {exc}") from exc
        freqs.append(f)
        psd.append(p)
        asd.append(a)
    try:
        return Spectrum(freqs=np.asarray(freqs), psd=np.asarray(psd), asd=np.asarray(asd))
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc
