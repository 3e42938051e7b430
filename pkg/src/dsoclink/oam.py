"""Laguerre-Gaussian (OAM) beam propagation and mode-modulation accounting."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid


@dataclass(frozen=True)
class LgBeamSpec:
    azimuthal_index: int  # l; sign gives the twist direction
    radial_index: int  # p
    waist: float  # w0, m
    wavelength: float  # m

    def __post_init__(self):
        if int(self.azimuthal_index) != self.azimuthal_index:
            raise ValueError("azimuthal index must be an integer")
        if int(self.radial_index) != self.radial_index or self.radial_index < 0:
            raise ValueError("radial index must be a non-negative integer")
        if not self.waist > 0:
            raise ValueError("waist must be positive")
        if not self.wavelength > 0:
            raise ValueError("wavelength must be positive")

    @classmethod
    def from_aperture(cls, diameter: float, wavelength: float, l: int = 0, p: int = 0,
                      waist_fraction: float = 0.5):
        """Beam launched from an aperture of ``diameter``; ``w0 = waist_fraction * D``."""
        return cls(l, p, waist_fraction * diameter, wavelength)

    @property
    def rayleigh_range(self) -> float:
        return math.pi * self.waist**2 / self.wavelength

    @property
    def wavenumber(self) -> float:
        return 2 * math.pi / self.wavelength

    @property
    def normalization(self) -> float:
        """Amplitude constant giving every mode unit total power."""
        l, p = abs(self.azimuthal_index), self.radial_index
        return math.sqrt(2 * math.factorial(p) / (math.pi * math.factorial(p + l)))


def beam_radius(spec: LgBeamSpec, z):
    """Gaussian beam radius ``w(z)`` at distance ``z`` from the waist."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise ValueError("z must be non-negative")
    w = spec.waist * np.sqrt(1 + (z / spec.rayleigh_range) ** 2)
    return float(w) if w.ndim == 0 else w


def genlaguerre(p: int, alpha: float, x):
    """Generalized Laguerre polynomial ``L_p^alpha(x)`` by upward recurrence."""
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if p == 0:
        return prev
    cur = 1 + alpha - x
    for k in range(1, p):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def lg_field(spec: LgBeamSpec, r, phi, z):
    """Complex field of the LG mode in cylindrical coordinates (r, phi, z)."""
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(r < 0):
        raise ValueError("r must be non-negative")
    l, p = spec.azimuthal_index, spec.radial_index
    al = abs(l)
    zr = spec.rayleigh_range
    w = beam_radius(spec, z)
    rho2 = 2 * r**2 / w**2
    amp = (spec.normalization / w) * rho2 ** (al / 2) * np.exp(-r**2 / w**2) * genlaguerre(p, al, rho2)
    phase = (-spec.wavenumber * r**2 * z / (2 * (z**2 + zr**2))
             + l * phi
             + (2 * p + al + 1) * math.atan2(z, zr))
    return amp * np.exp(1j * phase)


def intensity(spec: LgBeamSpec, r, z):
    """``|E|^2``; azimuthally symmetric so phi is dropped."""
    return np.abs(lg_field(spec, r, 0.0, z)) ** 2


def ring_radius(spec: LgBeamSpec, z: float) -> float:
    """Radius of peak intensity of a single-ring (p = 0) mode."""
    if spec.radial_index != 0:
        raise ValueError("ring_radius is defined for p = 0 only; sample the profile instead")
    return beam_radius(spec, z) * math.sqrt(abs(spec.azimuthal_index) / 2)


@dataclass(frozen=True)
class BeamProfile:
    distance: float
    radius_at_z: float
    ring_radius: float
    samples: list  # (r, intensity) pairs

    @property
    def radii(self):
        return np.array([s[0] for s in self.samples])

    @property
    def intensities(self):
        return np.array([s[1] for s in self.samples])

    @property
    def peak_radius(self) -> float:
        return float(self.radii[int(np.argmax(self.intensities))])

    def total_power(self) -> float:
        """Trapezoid estimate of the power through the sampled disc."""
        r, i = self.radii, self.intensities
        return float(trapezoid(i * 2 * np.pi * r, r))


def profile(spec: LgBeamSpec, z: float, n: int = 2001, extent: float = 4.0) -> BeamProfile:
    """Sample radial intensity on ``[0, extent * w(z)]`` with ``n`` points."""
    w = beam_radius(spec, z)
    r = np.linspace(0.0, extent * w, n)
    i = intensity(spec, r, z)
    if spec.radial_index == 0:
        peak = ring_radius(spec, z)
    else:
        peak = float(r[int(np.argmax(i))])
    return BeamProfile(z, w, peak, list(zip(r.tolist(), i.tolist())))


def polar_raster(spec: LgBeamSpec, z: float, n_r: int = 101, n_phi: int = 72,
                 extent: float = 3.0):
    """Field on an (r, phi) grid as rows ``(r, phi, intensity_normalized, phase)``."""
    w = beam_radius(spec, z)
    r = np.linspace(0.0, extent * w, n_r)
    phi = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    rr, pp = np.meshgrid(r, phi, indexing="ij")
    e = lg_field(spec, rr, pp, z)
    inten = np.abs(e) ** 2
    peak = inten.max()
    if peak > 0:
        inten = inten / peak
    return [(float(a), float(b), float(c), float(d))
            for a, b, c, d in zip(rr.ravel(), pp.ravel(), inten.ravel(), np.angle(e).ravel())]


def mm_bits_per_symbol(n_modes: int, ppm_order: int) -> float:
    """Bits per symbol when the choice among ``n_modes`` OAM modes also carries data."""
    for name, v, least in (("n_modes", n_modes, 1), ("ppm_order", ppm_order, 2)):
        if int(v) != v or v < least or int(v) & (int(v) - 1):
            raise ValueError(f"{name} must be a power of two, got {v!r}")
    return math.log2(ppm_order) + math.log2(n_modes)


def mm_rate_multiplier(n_modes: int, ppm_order: int) -> float:
    """Throughput relative to plain PPM of the same order."""
    return mm_bits_per_symbol(n_modes, ppm_order) / math.log2(ppm_order)
