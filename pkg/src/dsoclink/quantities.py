"""Physical quantity types and unit conversions.

Everything downstream works in SI base units (W, m, s, J). Decibels only
appear at the input/output boundary. The value types below are thin
``float`` subclasses: they validate on construction and otherwise behave
like plain numbers.
"""
from __future__ import annotations

import math

PLANCK = 6.62607015e-34  # J s
SPEED_OF_LIGHT = 299_792_458.0  # m/s
AU = 149_597_870_700.0  # m


class _Quantity(float):
    unit = ""

    def __new__(cls, value: float):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"{cls.__name__} must be finite, got {value!r}")
        cls._check(value)
        return super().__new__(cls, value)

    @classmethod
    def _check(cls, value: float) -> None:
        pass

    @property
    def value(self) -> float:
        return float(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({float(self)!r})"


class PowerW(_Quantity):
    unit = "W"

    @classmethod
    def _check(cls, value):
        if value < 0:
            raise ValueError(f"power must be non-negative, got {value!r} W")


class LengthM(_Quantity):
    unit = "m"

    @classmethod
    def _check(cls, value):
        if value < 0:
            raise ValueError(f"length must be non-negative, got {value!r} m")

    @classmethod
    def from_au(cls, au: float) -> "LengthM":
        return cls(au * AU)

    @classmethod
    def from_km(cls, km: float) -> "LengthM":
        return cls(km * 1e3)

    @property
    def au(self) -> float:
        return float(self) / AU


class DecibelLoss(_Quantity):
    """Loss in dB; positive values attenuate."""

    unit = "dB"

    @property
    def linear(self) -> float:
        return db_to_linear(self)


class PhotonEnergyJ(_Quantity):
    unit = "J"

    @classmethod
    def _check(cls, value):
        if value <= 0:
            raise ValueError(f"photon energy must be positive, got {value!r} J")


def db_to_linear(x: float) -> float:
    """Convert a loss in dB to its linear factor, ``10**(-x/10)``."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"dB value must be finite, got {x!r}")
    return 10.0 ** (-x / 10.0)


def linear_to_db(factor: float) -> float:
    """Inverse of :func:`db_to_linear`: a factor of 0.1 is a 10 dB loss."""
    factor = float(factor)
    if not factor > 0:
        raise ValueError(f"linear factor must be positive, got {factor!r}")
    return -10.0 * math.log10(factor)


def to_db(x: float) -> float:
    """Plain ``10 log10(x)``; gains come out positive, losses negative."""
    return 10.0 * math.log10(x)


def photon_energy(wavelength: float) -> PhotonEnergyJ:
    """Energy of one photon at ``wavelength`` (m), ``h c / lambda``."""
    wavelength = float(wavelength)
    if not wavelength > 0:
        raise ValueError(f"wavelength must be positive, got {wavelength!r} m")
    return PhotonEnergyJ(PLANCK * SPEED_OF_LIGHT / wavelength)
