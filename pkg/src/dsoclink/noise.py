"""Detected noise power: background light, dark counts and transmitter leakage."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .quantities import PowerW

NIGHT_SKY_RADIANCE = 1e-5  # W/m^2/sr/um
DAY_SKY_RADIANCE = 54.45  # W/m^2/sr/um, sunny day


@dataclass(frozen=True)
class BackgroundEnvironment:
    """Background radiance seen by the receiver.

    Radiances are per micrometre of optical bandwidth, so every term is
    scaled by ``filter_width`` (um).
    """

    sky_radiance: float = NIGHT_SKY_RADIANCE  # W/m^2/sr/um
    planet_radiance: float = 0.0  # W/m^2/sr/um
    stray_factor: float = 0.0
    star_irradiance: float = 0.0  # W/m^2/um
    filter_width: float = 0.2e-3  # um
    background_reduction: float = 1.0

    def __post_init__(self):
        for name in ("sky_radiance", "planet_radiance", "stray_factor", "star_irradiance"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if not self.filter_width > 0:
            raise ValueError("filter_width must be positive")
        if not 0 < self.background_reduction <= 1:
            raise ValueError("background_reduction must lie in (0, 1]")


@dataclass(frozen=True)
class ReceiverOptics:
    focal_length: float  # m
    detector_diameter: float  # m
    receiver_area: float  # m^2
    receiver_efficiency: float = 1.0

    def __post_init__(self):
        if not self.focal_length > 0:
            raise ValueError("focal_length must be positive")
        if self.detector_diameter < 0:
            raise ValueError("detector_diameter must be non-negative")
        if self.receiver_area < 0:
            raise ValueError("receiver_area must be non-negative")
        if not 0 < self.receiver_efficiency <= 1:
            raise ValueError("receiver_efficiency must lie in (0, 1]")

    @classmethod
    def for_aperture(cls, focal_length, detector_diameter, aperture_diameter,
                     receiver_efficiency=1.0, secondary_diameter=0.0):
        area = math.pi / 4 * (aperture_diameter**2 - secondary_diameter**2)
        return cls(focal_length, detector_diameter, area, receiver_efficiency)


@dataclass(frozen=True)
class DetectorNoiseParams:
    dark_rate: float = 0.0  # electrons/s/m^2
    array_count: int = 1
    leakage_ratio: float = 0.0
    quantum_efficiency: float = 1.0

    def __post_init__(self):
        if self.dark_rate < 0:
            raise ValueError("dark_rate must be non-negative")
        if int(self.array_count) != self.array_count or self.array_count < 1:
            raise ValueError("array_count must be a positive integer")
        if self.leakage_ratio < 0:
            raise ValueError("leakage_ratio must be non-negative")
        if not 0 < self.quantum_efficiency <= 1:
            raise ValueError("quantum_efficiency must lie in (0, 1]")


def field_of_view(optics: ReceiverOptics) -> float:
    """Solid angle (sr) subtended by the detector through the telescope."""
    half_angle = optics.detector_diameter / optics.focal_length
    if half_angle >= math.pi:
        raise ValueError("detector_diameter / focal_length must be below pi")
    # 1 - cos(x) loses everything to cancellation for x ~ 1e-6; use 2 sin^2(x/2).
    return 4 * math.pi * math.sin(half_angle / 2) ** 2


def background_power(env: BackgroundEnvironment, optics: ReceiverOptics) -> PowerW:
    collect = optics.receiver_efficiency * optics.receiver_area * env.filter_width
    extended = field_of_view(optics) * (env.sky_radiance + env.planet_radiance * env.stray_factor)
    point = env.star_irradiance
    return PowerW((extended + point) * collect * env.background_reduction)


def dark_power(noise: DetectorNoiseParams, optics: ReceiverOptics, energy: float) -> PowerW:
    """Dark-count contribution, expressed as an equivalent optical power."""
    return PowerW(optics.detector_diameter**2 * noise.dark_rate * energy * noise.array_count)


def noise_power(bg: float, noise: DetectorNoiseParams, optics: ReceiverOptics,
                energy: float, pr_ap: float = 0.0) -> PowerW:
    """Total detected noise power.

    Sum of detected background (``eta_det * P_b`` per detector), dark counts
    and transmitter leakage ``eta_leak * P_r,ap * eta_det``.
    """
    eta = noise.quantum_efficiency
    return PowerW(
        eta * bg * noise.array_count
        + dark_power(noise, optics, energy)
        + noise.leakage_ratio * pr_ap * eta
    )
