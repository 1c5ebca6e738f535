"""Physical constants in SI units."""

from typing import Final

C: Final[float] = 299792458.0
"""Speed of light (m/s)."""

G: Final[float] = 6.67430e-11
"""Gravitational constant (m^3 kg^-1 s^-2)."""

M_SUN: Final[float] = 1.988409870698051e30
"""Solar mass (kg)."""

MPC: Final[float] = 3.0856775814913673e22
"""Megaparsec (m)."""
