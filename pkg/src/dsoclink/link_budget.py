"""Received optical power ahead of the photon detector.

The budget is a product of linear factors (transmit power, aperture gains,
free-space loss, atmosphere, cirrus, scintillation, pointing, optics
efficiencies). :func:`budget` also returns each factor in dB so the total
can be audited term by term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

from .quantities import PowerW, db_to_linear, to_db


@dataclass(frozen=True)
class Terminal:
    aperture_diameter: float  # m
    secondary_diameter: float = 0.0  # m, central obscuration
    optics_efficiency: float = 1.0

    def __post_init__(self):
        if not self.aperture_diameter > 0:
            raise ValueError("aperture_diameter must be positive")
        if self.secondary_diameter < 0:
            raise ValueError("secondary_diameter must be non-negative")
        if self.secondary_diameter >= self.aperture_diameter:
            raise ValueError("secondary_diameter must be smaller than aperture_diameter")
        if not 0 < self.optics_efficiency <= 1:
            raise ValueError("optics_efficiency must lie in (0, 1]")

    @property
    def obscuration_ratio(self) -> float:
        return self.secondary_diameter / self.aperture_diameter

    @property
    def clear_area(self) -> float:
        """Collecting area in m^2, net of the central obscuration."""
        return math.pi * self.aperture_diameter**2 / 4 * (1 - self.obscuration_ratio**2)


@dataclass(frozen=True)
class FixedPointing:
    loss_db: float = 1.95

    def __post_init__(self):
        if self.loss_db < 0:
            raise ValueError("pointing loss must be >= 0 dB")


@dataclass(frozen=True)
class ComputedPointing:
    sigma: float  # rad, RMS pointing error
    p0: float  # probability level

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("pointing sigma must be non-negative")
        if not 0 < self.p0 < 1:
            raise ValueError(f"p0 must lie in (0, 1), got {self.p0!r}")


PointingMode = Union[FixedPointing, ComputedPointing]


@dataclass(frozen=True)
class PathEnvironment:
    atmospheric_transmittance: float = 1.0
    cirrus_loss_db: float = 0.0
    scintillation_loss_db: float = 0.0
    pointing: PointingMode = field(default_factory=lambda: FixedPointing(0.0))
    link_margin_db: float = 0.0  # reported only, never applied to power

    def __post_init__(self):
        if not 0 < self.atmospheric_transmittance <= 1:
            raise ValueError("atmospheric_transmittance must lie in (0, 1]")
        for name in ("cirrus_loss_db", "scintillation_loss_db", "link_margin_db"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0 dB")


@dataclass(frozen=True)
class LinkScenario:
    tx: Terminal
    rx: Terminal
    env: PathEnvironment
    range: float  # m
    wavelength: float  # m
    tx_power: float  # W

    def __post_init__(self):
        if not self.range > 0:
            raise ValueError("range must be positive")
        if not self.wavelength > 0:
            raise ValueError("wavelength must be positive")
        if not self.tx_power > 0:
            raise ValueError("tx_power must be positive")


def free_space_loss(range_m: float, wavelength: float) -> float:
    """Linear free-space loss factor ``(lambda / (4 pi R))**2``."""
    if not range_m > 0:
        raise ValueError("range must be positive")
    if not wavelength > 0:
        raise ValueError("wavelength must be positive")
    return (wavelength / (4 * math.pi * range_m)) ** 2


def tx_gain(tx: Terminal, wavelength: float) -> float:
    """Gaussian-beam transmitter gain, ``2 (pi D_t / lambda)**2``."""
    return 2 * (math.pi * tx.aperture_diameter / wavelength) ** 2


def rx_gain(rx: Terminal, wavelength: float) -> float:
    """Receiver gain of an obscured circular aperture."""
    gamma = rx.obscuration_ratio
    if gamma >= 1:
        raise ValueError("receiver fully obscured")
    return (math.pi * rx.aperture_diameter / wavelength) ** 2 * (1 - gamma**2)


def beam_half_width(tx: Terminal, wavelength: float) -> float:
    """Gaussian half-beamwidth angle in rad, ``2 lambda / (pi D_t)``."""
    return 2 * wavelength / (math.pi * tx.aperture_diameter)


def pointing_loss(env: PathEnvironment, tx: Terminal, wavelength: float) -> float:
    """Linear pointing-loss factor.

    In computed mode this is ``p0 ** (4 sigma^2 / w0^2)`` with ``w0`` the
    Gaussian half-beamwidth; in fixed mode the stored dB value is converted.
    """
    mode = env.pointing
    if isinstance(mode, FixedPointing):
        return db_to_linear(mode.loss_db)
    if not 0 < mode.p0 < 1:
        raise ValueError(f"p0 must lie in (0, 1), got {mode.p0!r}")
    w0 = beam_half_width(tx, wavelength)
    return mode.p0 ** (4 * mode.sigma**2 / w0**2)


@dataclass(frozen=True)
class LinkBudget:
    scenario: LinkScenario
    factors: dict  # name -> linear factor, in multiplication order
    received_power: PowerW

    @property
    def breakdown_db(self) -> dict:
        """Each factor in dB (gains positive, losses negative)."""
        return {name: to_db(v) for name, v in self.factors.items()}

    @property
    def received_power_dbw(self) -> float:
        return to_db(self.received_power)

    @property
    def link_margin_db(self) -> float:
        return self.scenario.env.link_margin_db


def budget(s: LinkScenario) -> LinkBudget:
    env = s.env
    factors = {
        "tx_gain": tx_gain(s.tx, s.wavelength),
        "rx_gain": rx_gain(s.rx, s.wavelength),
        "free_space": free_space_loss(s.range, s.wavelength),
        "atmosphere": env.atmospheric_transmittance,
        "cirrus": db_to_linear(env.cirrus_loss_db),
        "scintillation": db_to_linear(env.scintillation_loss_db),
        "pointing": pointing_loss(env, s.tx, s.wavelength),
        "tx_optics": s.tx.optics_efficiency,
        "rx_optics": s.rx.optics_efficiency,
    }
    p = s.tx_power
    for v in factors.values():
        p *= v
    return LinkBudget(s, factors, PowerW(p))


def received_power(s: LinkScenario) -> PowerW:
    """Optical power after the receiver telescope, before detection."""
    return budget(s).received_power

