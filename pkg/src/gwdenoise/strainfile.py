"""Plain-text strain file ingestion and emission.

Format: ``# key = value`` header lines for detector, gps_start and
sample_rate_hz, followed by one strain sample per line. Sample rates of
4096 Hz and 16384 Hz are accepted silently; anything else triggers a
warning (files converted from public observatory records normally use one
of those two).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .detector import StrainSeries
from .errors import DataError

EXPECTED_SAMPLE_RATES = (4096.0, 16384.0)


@dataclass(eq=False)
class StrainFile:
    """One detector strain record: header metadata plus samples."""

    detector: str
    gps_start: float
    sample_rate: float
    values: np.ndarray

    def to_series(self) -> StrainSeries:
        return StrainSeries(sample_rate=self.sample_rate, values=self.values, label=self.detector)


def read_strain(path: str | Path) -> StrainFile:
    """Parse a strain file; malformed lines raise DataError naming the line."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"missing strain file {path}")
    header: dict[str, str] = {}
    values = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            key, sep, value = body.partition("=")
            if not sep:
                raise DataError(f"{path}:{lineno}: malformed header line {line!r}")
            header[key.strip()] = value.strip()
            continue
        try:
            values.append(float(stripped))
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: bad sample value {stripped!r}") from exc
    try:
        detector = header["detector"]
        gps_start = float(header["gps_start"])
        sample_rate = float(header["sample_rate_hz"])
    except (KeyError, ValueError) as exc:
        raise DataError(f"{path}: incomplete or invalid header: {exc}") from exc
    if sample_rate <= 0:
        raise DataError(f"{path}: sample_rate_hz must be positive")
    if sample_rate not in EXPECTED_SAMPLE_RATES:
        warnings.warn(
            f"{path}: unusual sample rate {sample_rate} Hz (expected one of "
            f"{EXPECTED_SAMPLE_RATES})",
            stacklevel=2,
        )
    if not values:
        raise DataError(f"{path}: no samples")
    arr = np.asarray(values)
    if not np.isfinite(arr).all():
        raise DataError(f"{path}: non-finite sample values")
    return StrainFile(detector=detector, gps_start=gps_start, sample_rate=sample_rate, values=arr)


def write_strain(strain: StrainFile, path: str | Path) -> None:
    """Write a strain file with the same header keys ingestion expects."""
    lines = [
        f"# detector = {strain.detector}",
        f"# gps_start = {strain.gps_start:.17g}",
        f"# sample_rate_hz = {strain.sample_rate:.17g}",
    ]
    lines.extend(f"{v:.16e}" for v in strain.values)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
