"""Leading-order compact-binary chirp waveforms and source-parameter relations.

The waveforms are Newtonian-quadrupole inspirals parameterized by chirp mass,
luminosity distance and inclination. Component spins are carried as metadata
only; they do not enter the phase or amplitude at this order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C, G, M_SUN, MPC
from .errors import ConfigError, UnviableTemplateError

DEFAULT_DISTANCE_MPC = 410.0
DEFAULT_INCLINATION = 0.0
DEFAULT_F_MIN = 20.0

# Safety margin below Nyquist for the termination frequency.
NYQUIST_MARGIN = 0.9


def chirp_mass(m1: float, m2: float) -> float:
    """
    Chirp mass of a binary.

    Parameters
    ----------
    m1, m2
        Component masses (any common unit).

    Returns
    -------
    Chirp mass (m1*m2)^(3/5) / (m1+m2)^(1/5), same unit as the inputs.
    """
    if m1 <= 0 or m2 <= 0:
        raise ValueError(f"masses must be positive, got m1={m1}, m2={m2}")
    return (m1 * m2) ** 0.6 / (m1 + m2) ** 0.2


def symmetric_mass_ratio(m1: float, m2: float) -> float:
    """
    Symmetric mass ratio m1*m2 / (m1+m2)^2, in (0, 0.25].

    Maximal (0.25) for equal masses.
    """
    if m1 <= 0 or m2 <= 0:
        raise ValueError(f"masses must be positive, got m1={m1}, m2={m2}")
    return (m1 * m2) / (m1 + m2) ** 2


def dimensionless_spin(m: float, s: float) -> float:
    """
    Dimensionless spin magnitude of a compact object.

    Parameters
    ----------
    m
        Object mass (solar masses).
    s
        Spin angular momentum (kg m^2 / s).

    Returns
    -------
    c*S / (G*m^2), unitless.
    """
    if m <= 0:
        raise ValueError(f"mass must be positive, got {m}")
    return C * s / (G * (m * M_SUN) ** 2)


def isco_frequency(m1: float, m2: float) -> float:
    """
    Gravitational-wave frequency at the innermost stable circular orbit.

    Parameters
    ----------
    m1, m2
        Component masses (solar masses).

    Returns
    -------
    f_ISCO = c^3 / (6^(3/2) * pi * G * M_total) in Hz.
    """
    if m1 <= 0 or m2 <= 0:
        raise ValueError(f"masses must be positive, got m1={m1}, m2={m2}")
    return C**3 / (6.0**1.5 * math.pi * G * ((m1 + m2) * M_SUN))


def gw_frequency_at(tau: float, mc: float) -> float:
    """
    Instantaneous gravitational-wave frequency of a leading-order inspiral.

    Parameters
    ----------
    tau
        Time to coalescence (s), tau > 0.
    mc
        Chirp mass (solar masses).

    Returns
    -------
    f(tau) = (1/pi) * (G*mc/c^3)^(-5/8) * (5/(256*tau))^(3/8) in Hz.
    Strictly decreasing in both tau and mc.
    """
    if tau <= 0:
        raise ValueError(f"time to coalescence must be positive, got {tau}")
    if mc <= 0:
        raise ValueError(f"chirp mass must be positive, got {mc}")
    gmc = G * mc * M_SUN / C**3
    return (1.0 / math.pi) * gmc ** (-5.0 / 8.0) * (5.0 / (256.0 * tau)) ** (3.0 / 8.0)


def time_to_coalescence(f: float, mc: float) -> float:
    """
    Time to coalescence at which the GW frequency equals ``f`` (inverse of
    :func:`gw_frequency_at`).

    Parameters
    ----------
    f
        Gravitational-wave frequency (Hz), f > 0.
    mc
        Chirp mass (solar masses).
    """
    if f <= 0:
        raise ValueError(f"frequency must be positive, got {f}")
    if mc <= 0:
        raise ValueError(f"chirp mass must be positive, got {mc}")
    gmc = G * mc * M_SUN / C**3
    return (5.0 / 256.0) * gmc ** (-5.0 / 3.0) * (math.pi * f) ** (-8.0 / 3.0)


@dataclass(frozen=True)
class BinaryParams:
    """
    Source parameters for one template.

    Masses are in solar masses and are stored in canonical order m1 >= m2;
    constructing with m1 < m2 swaps the masses (and the spins with them).
    Spins are dimensionless magnitudes, distance is in Mpc, inclination in
    radians, f_min is the starting GW frequency in Hz.
    """

    m1: float
    m2: float
    spin1: float = 0.7
    spin2: float = 0.9
    distance: float = DEFAULT_DISTANCE_MPC
    inclination: float = DEFAULT_INCLINATION
    f_min: float = DEFAULT_F_MIN

    def __post_init__(self) -> None:
        if self.m1 <= 0 or self.m2 <= 0:
            raise ValueError(f"masses must be positive, got m1={self.m1}, m2={self.m2}")
        if self.m1 < self.m2:
            m1, m2 = self.m2, self.m1
            s1, s2 = self.spin2, self.spin1
            object.__setattr__(self, "m1", m1)
            object.__setattr__(self, "m2", m2)
            object.__setattr__(self, "spin1", s1)
            object.__setattr__(self, "spin2", s2)
        if not (abs(self.spin1) < 1.0 and abs(self.spin2) < 1.0):
            raise ValueError(
                f"dimensionless spins must satisfy |chi| < 1, got {self.spin1}, {self.spin2}"
            )
        if self.distance <= 0:
            raise ValueError(f"distance must be positive, got {self.distance}")
        if self.f_min <= 0:
            raise ValueError(f"f_min must be positive, got {self.f_min}")

    @property
    def chirp_mass(self) -> float:
        """Chirp mass (solar masses)."""
        return chirp_mass(self.m1, self.m2)

    @property
    def total_mass(self) -> float:
        """Total mass (solar masses)."""
        return self.m1 + self.m2


@dataclass(frozen=True, eq=False)
class PolarizedWaveform:
    """
    Sampled plus/cross strain polarizations.

    ``t`` holds time relative to coalescence (s), strictly increasing with
    uniform step 1/sample_rate. ``h_plus`` and ``h_cross`` are dimensionless
    strain arrays of the same length.
    """

    sample_rate: float
    t: np.ndarray
    h_plus: np.ndarray
    h_cross: np.ndarray

    def __post_init__(self) -> None:
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        n = len(self.t)
        if len(self.h_plus) != n or len(self.h_cross) != n:
            raise ValueError("t, h_plus, h_cross must have equal lengths")
        if n == 0:
            raise ValueError("waveform must contain at least one sample")
        for name in ("t", "h_plus", "h_cross"):
            if not np.isfinite(getattr(self, name)).all():
                raise ValueError(f"{name} contains non-finite values")
        if n > 1:
            dt = 1.0 / self.sample_rate
            steps = np.diff(self.t)
            if steps.min() <= 0 or not np.allclose(steps, dt, rtol=1e-9, atol=0.0):
                raise ValueError("t must increase uniformly by 1/sample_rate")

    def __len__(self) -> int:
        return len(self.t)


def generate_chirp(params: BinaryParams, sample_rate: float) -> PolarizedWaveform:
    """
    Synthesize a leading-order inspiral chirp.

    The waveform is sampled from the time where the GW frequency equals
    ``params.f_min`` until it reaches min(f_ISCO, 0.9 * Nyquist); the
    coalescence time itself is never sampled (the amplitude diverges there).

    Parameters
    ----------
    params
        Source parameters.
    sample_rate
        Sampling rate (Hz). Must satisfy sample_rate >= 2 * f_ISCO.

    Returns
    -------
    PolarizedWaveform with
    h_plus = A(t) * (1 + cos^2 i)/2 * cos(Phi(t)) and
    h_cross = A(t) * cos(i) * sin(Phi(t)), where
    A(t) = 4 * (G*Mc)^(5/3) * (pi*f(t))^(2/3) / (c^4 * d).

    Raises
    ------
    UnviableTemplateError
        If f_min >= f_ISCO, so no inspiral band remains.
    ConfigError
        If the sample rate violates Nyquist for f_ISCO.
    """
    f_isco = isco_frequency(params.m1, params.m2)
    if params.f_min >= f_isco:
        raise UnviableTemplateError(
            f"f_min={params.f_min} Hz is at or above f_ISCO={f_isco:.3f} Hz "
            f"for m1={params.m1}, m2={params.m2}"
        )
    if sample_rate < 2.0 * f_isco:
        raise ConfigError(
            f"sample_rate={sample_rate} Hz violates Nyquist for "
            f"f_ISCO={f_isco:.3f} Hz (need >= {2.0 * f_isco:.3f} Hz)"
        )
    f_term = min(f_isco, NYQUIST_MARGIN * 0.5 * sample_rate)
    mc = chirp_mass(params.m1, params.m2)
    tau_start = time_to_coalescence(params.f_min, mc)
    tau_end = time_to_coalescence(f_term, mc)

    n = int(math.ceil((tau_start - tau_end) * sample_rate))
    tau = tau_start - np.arange(n) / sample_rate
    tau = tau[tau > tau_end]  # keep f strictly below the termination frequency
    if tau.size == 0:
        raise UnviableTemplateError(
            f"no samples between f_min={params.f_min} Hz and termination "
            f"{f_term:.3f} Hz for m1={params.m1}, m2={params.m2}"
        )

    gmc = G * mc * M_SUN / C**3  # chirp mass as a time (s)
    freq = (1.0 / math.pi) * gmc ** (-5.0 / 8.0) * (5.0 / (256.0 * tau)) ** (3.0 / 8.0)
    phase = -2.0 * (5.0 * gmc) ** (-5.0 / 8.0) * tau ** (5.0 / 8.0)
    amp = (
        4.0
        * (G * mc * M_SUN) ** (5.0 / 3.0)
        * (np.pi * freq) ** (2.0 / 3.0)
        / (C**4 * (params.distance * MPC))
    )

    cos_i = math.cos(params.inclination)
    if abs(cos_i) < 1e-15:
        cos_i = 0.0  # float pi/2 leaves cos ~ 6e-17; edge-on must kill h_cross exactly

    h_plus = amp * (0.5 * (1.0 + cos_i * cos_i)) * np.cos(phase)
    h_cross = amp * cos_i * np.sin(phase)
    for arr in (h_plus, h_cross):
        arr.flags.writeable = False
    t = -tau
    t.flags.writeable = False
    return PolarizedWaveform(sample_rate=float(sample_rate), t=t, h_plus=h_plus, h_cross=h_cross)
