"""Photon-counting detector losses: blocking (dead time), jitter, coding gap."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .quantities import PowerW, db_to_linear


@dataclass(frozen=True)
class PhotonCountingDetector:
    quantum_efficiency: float = 1.0
    dead_time: float = 0.0  # s
    jitter_sigma: float = 0.0  # s
    # Jitter loss is 10 log10(a*Psi + b*Psi + 1) as printed. Pass
    # jitter_quadratic=True for the 5*Psi^2 + 2*Psi + 1 reading.
    jitter_coeffs: tuple = (5.0, 2.0)
    jitter_quadratic: bool = False

    def __post_init__(self):
        if not 0 < self.quantum_efficiency <= 1:
            raise ValueError("quantum_efficiency must lie in (0, 1]")
        if self.dead_time < 0:
            raise ValueError("dead_time must be non-negative")
        if self.jitter_sigma < 0:
            raise ValueError("jitter_sigma must be non-negative")


@dataclass(frozen=True)
class FluxPair:
    signal_flux: float  # photons/s
    noise_flux: float = 0.0  # photons/s

    def __post_init__(self):
        if self.signal_flux < 0 or self.noise_flux < 0:
            raise ValueError("photon fluxes must be non-negative")

    @property
    def total(self) -> float:
        return self.signal_flux + self.noise_flux

    @classmethod
    def from_powers(cls, pr_ap, pn, energy, quantum_efficiency):
        # Noise power is already a detected quantity; only the signal carries eta.
        return cls(pr_ap * quantum_efficiency / energy, pn / energy)


def blocking_loss(flux: FluxPair, dead_time: float) -> float:
    """Fraction of photons registered by a single non-paralyzable detector.

    ``mu = 1 / (1 + l tau)`` with ``l`` the total (signal + noise) flux.
    """
    if dead_time < 0:
        raise ValueError("dead_time must be non-negative")
    return 1.0 / (1.0 + flux.total * dead_time)


def jitter_psi(sigma_j: float, t_slot: float, recc: float, m: int) -> float:
    """Normalized jitter variance for an ``m``-PPM, rate ``recc`` code."""
    if not t_slot > 0:
        raise ValueError("t_slot must be positive")
    if not 0 < recc <= 1:
        raise ValueError("code rate must lie in (0, 1]")
    if m < 2 or m & (m - 1):
        raise ValueError(f"PPM order must be a power of two >= 2, got {m}")
    return sigma_j / t_slot * (1 + math.tanh(recc - 0.5)) / 1.25 ** math.log2(m)


def jitter_loss(psi: float, coeffs=(5.0, 2.0), quadratic: bool = False) -> float:
    """Jitter loss in dB (>= 0)."""
    if psi < 0:
        raise ValueError("psi must be non-negative")
    a, b = coeffs
    first = psi**2 if quadratic else psi
    return 10 * math.log10(a * first + b * psi + 1)


def detected_power(pr_ap: float, quantum_efficiency: float, mu: float,
                   jitter_db: float) -> PowerW:
    """Power registered by the detector after blocking, jitter and QE."""
    if not 0 < mu <= 1:
        raise ValueError("blocking factor must lie in (0, 1]")
    if jitter_db < 0:
        raise ValueError("jitter loss must be >= 0 dB")
    return PowerW(pr_ap * mu * db_to_linear(jitter_db) * quantum_efficiency)


def required_power_with_coding(p_det: float, coding_efficiency_db: float) -> PowerW:
    """Scale detected power by the code's dB gap to capacity."""
    if coding_efficiency_db < 0:
        raise ValueError("coding efficiency gap must be >= 0 dB")
    return PowerW(p_det / db_to_linear(coding_efficiency_db))


@dataclass(frozen=True)
class Detection:
    """Per-factor record of one detection step."""

    pr_ap: float
    flux: FluxPair
    blocking: float  # mu, linear
    psi: float
    jitter_db: float
    quantum_efficiency: float
    p_det: PowerW

    @property
    def blocking_db(self) -> float:
        return -10 * math.log10(self.blocking)

    @property
    def total_loss_db(self) -> float:
        return self.blocking_db + self.jitter_db - 10 * math.log10(self.quantum_efficiency)


def detect(pr_ap: float, pn: float, energy: float, det: PhotonCountingDetector,
           t_slot: float, recc: float, m: int) -> Detection:
    flux = FluxPair.from_powers(pr_ap, pn, energy, det.quantum_efficiency)
    mu = blocking_loss(flux, det.dead_time)
    psi = jitter_psi(det.jitter_sigma, t_slot, recc, m)
    lj = jitter_loss(psi, det.jitter_coeffs, det.jitter_quadratic)
    p_det = detected_power(pr_ap, det.quantum_efficiency, mu, lj)
    return Detection(pr_ap, flux, mu, psi, lj, det.quantum_efficiency, p_det)
