"""Shared fixtures: the desk-scale bank and held-out noisy injections.

The desk bank is 40 chirp templates (5 x 4 mass pairs, two detectors) padded
to a common length of 256 samples at 256 Hz. Injections are chirps at
grid-interior masses with white Gaussian noise scaled to exactly 0 dB
oracle SNR.
"""

import numpy as np
import pytest

from gwdenoise.bank import GridSpec, TemplateBank, assemble_bank, build_grid
from gwdenoise.detector import DetectorConfig, StrainSeries, project
from gwdenoise.waveform import BinaryParams, generate_chirp

DESK_LENGTH = 256
DESK_SAMPLE_RATE = 256.0

DESK_GRID = GridSpec(
    m1_min=33.0,
    m1_max=37.0,
    m2_min=26.0,
    m2_max=29.0,
    step=1.0,
    detectors=("H1", "L1"),
    sample_rate=DESK_SAMPLE_RATE,
    f_min=25.0,
)

# Interior mass pairs (between training grid points), 20 trials.
INJECTION_POINTS = [
    (m1, m2, det)
    for m1 in (33.5, 34.5, 35.5, 36.5)
    for m2 in (26.5, 27.5, 28.5)
    for det in ("H1", "L1")
][:20]


def make_desk_bank() -> TemplateBank:
    return assemble_bank(build_grid(DESK_GRID), DESK_SAMPLE_RATE, pad_to=DESK_LENGTH)


def make_injections(noise_seed: int = 99) -> list[tuple[StrainSeries, StrainSeries]]:
    """(clean, noisy) pairs at exactly 0 dB oracle SNR."""
    rng = np.random.default_rng(noise_seed)
    pairs = []
    for m1, m2, det in INJECTION_POINTS:
        params = BinaryParams(
            m1, m2,
            spin1=DESK_GRID.spin1,
            spin2=DESK_GRID.spin2,
            distance=DESK_GRID.distance,
            inclination=DESK_GRID.inclination,
            f_min=DESK_GRID.f_min,
        )
        series = project(generate_chirp(params, DESK_SAMPLE_RATE), DetectorConfig.default(det))
        clean = np.zeros(DESK_LENGTH)
        clean[: len(series.values)] = series.values
        noise = rng.normal(size=DESK_LENGTH)
        noise *= np.sqrt(np.mean(clean**2) / np.mean(noise**2))
        pairs.append(
            (
                StrainSeries(DESK_SAMPLE_RATE, clean, label=det),
                StrainSeries(DESK_SAMPLE_RATE, clean + noise, label=det),
            )
        )
    return pairs


@pytest.fixture(scope="session")
def desk_bank() -> TemplateBank:
    return make_desk_bank()


@pytest.fixture(scope="session")
def injections() -> list[tuple[StrainSeries, StrainSeries]]:
    return make_injections()
