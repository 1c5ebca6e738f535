"""Single-detector response: antenna patterns and polarization projection.

Angles are given directly in each detector's frame (no Earth-fixed
transformation) and inter-detector time delays are not modeled; distinct
per-detector geometry is what makes the recorded strain differ between
interferometers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .waveform import PolarizedWaveform

DETECTOR_ORDER = ("H1", "L1", "V1")

# (theta, phi, psi) in rad; fixed, distinct defaults, overridable per run.
DEFAULT_DETECTOR_ANGLES = {
    "H1": (0.30, 1.20, 0.00),
    "L1": (0.70, 2.10, 0.00),
    "V1": (1.10, 0.40, 0.00),
}


@dataclass(frozen=True)
class DetectorConfig:
    """Source geometry in one detector's frame."""

    name: str
    theta: float
    phi: float
    psi: float = 0.0

    def __post_init__(self) -> None:
        if self.name not in DETECTOR_ORDER:
            raise ValueError(f"unknown detector {self.name!r}, expected one of {DETECTOR_ORDER}")
        for angle in ("theta", "phi", "psi"):
            if not math.isfinite(getattr(self, angle)):
                raise ValueError(f"{angle} must be finite")

    @classmethod
    def default(cls, name: str) -> "DetectorConfig":
        if name not in DEFAULT_DETECTOR_ANGLES:
            raise ValueError(f"unknown detector {name!r}, expected one of {DETECTOR_ORDER}")
        theta, phi, psi = DEFAULT_DETECTOR_ANGLES[name]
        return cls(name=name, theta=theta, phi=phi, psi=psi)


@dataclass(frozen=True, eq=False)
class StrainSeries:
    """Uniformly sampled detector strain with optional metadata label."""

    sample_rate: float
    values: np.ndarray
    label: str | None = None

    def __post_init__(self) -> None:
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        values = np.asarray(self.values, dtype=float)
        if not np.isfinite(values).all():
            raise ValueError("strain values contain non-finite entries")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


def antenna_pattern(cfg: DetectorConfig) -> tuple[float, float]:
    """
    Long-wavelength antenna response factors (F_plus, F_cross).

    F_plus  = 1/2 (1 + cos^2 t) cos 2p cos 2s - cos t sin 2p sin 2s
    F_cross = 1/2 (1 + cos^2 t) cos 2p sin 2s + cos t sin 2p cos 2s

    with t = theta, p = phi, s = psi. Both factors lie in [-1, 1].
    """
    ct = math.cos(cfg.theta)
    c2phi, s2phi = math.cos(2.0 * cfg.phi), math.sin(2.0 * cfg.phi)
    c2psi, s2psi = math.cos(2.0 * cfg.psi), math.sin(2.0 * cfg.psi)
    half = 0.5 * (1.0 + ct * ct)
    f_plus = half * c2phi * c2psi - ct * s2phi * s2psi
    f_cross = half * c2phi * s2psi + ct * s2phi * c2psi
    return f_plus, f_cross


def project(w: PolarizedWaveform, cfg: DetectorConfig) -> StrainSeries:
    """
    Detector strain F_plus * h_plus + F_cross * h_cross.

    Linear in the waveform; the output keeps the input's sample rate and
    labels the series with the detector name.
    """
    f_plus, f_cross = antenna_pattern(cfg)
    values = f_plus * w.h_plus + f_cross * w.h_cross
    return StrainSeries(sample_rate=w.sample_rate, values=values, label=cfg.name)
