"""PPM signalling arithmetic and Poisson slot statistics."""
from __future__ import annotations

import math
from dataclasses import dataclass


def check_order(m: int) -> int:
    if int(m) != m or m < 2 or int(m) & (int(m) - 1):
        raise ValueError(f"PPM order must be a power of two >= 2, got {m!r}")
    return int(m)


@dataclass(frozen=True)
class PpmConfig:
    order: int
    slot_time: float  # s
    code_rate: float = 1.0

    def __post_init__(self):
        check_order(self.order)
        if not self.slot_time > 0:
            raise ValueError("slot_time must be positive")
        if not 0 < self.code_rate <= 1:
            raise ValueError("code_rate must lie in (0, 1]")

    @property
    def bits_per_symbol(self) -> int:
        return int(math.log2(self.order))

    @property
    def symbol_time(self) -> float:
        return self.order * self.slot_time

    @property
    def peak_rate(self) -> float:
        """Uncoded rate ``log2(M) / (M T_slot)`` in bit/s."""
        return self.bits_per_symbol / self.symbol_time


def data_rate(cfg: PpmConfig) -> float:
    """Information rate in bit/s after the code rate is applied."""
    return cfg.code_rate * cfg.peak_rate


@dataclass(frozen=True)
class PoissonSlotModel:
    signal_mean_per_pulse: float  # Ks, photons
    noise_mean_per_slot: float = 0.0  # Kb, photons

    def __post_init__(self):
        if self.signal_mean_per_pulse < 0 or self.noise_mean_per_slot < 0:
            raise ValueError("photon means must be non-negative")


def signal_photons_from_detected(p_det: float, energy: float, cfg: PpmConfig) -> float:
    """Ks from an already-detected power: ``l * M * T_slot``."""
    return p_det / energy * cfg.symbol_time


def signal_photons_from_incident(pr: float, energy: float, cfg: PpmConfig,
                                 quantum_efficiency: float) -> float:
    """Ks from incident power; applies the detector efficiency once."""
    return quantum_efficiency * pr / energy * cfg.symbol_time


def poisson_pmf(k: int, mean: float) -> float:
    if k < 0 or int(k) != k:
        raise ValueError("k must be a non-negative integer")
    if mean < 0:
        raise ValueError("mean must be non-negative")
    if mean == 0:
        return 1.0 if k == 0 else 0.0
    return math.exp(k * math.log(mean) - mean - math.lgamma(k + 1))


def symbol_error_probability(m: int, ks: float) -> float:
    """Uncoded PPM symbol error rate with no background light.

    A symbol is lost only when the pulsed slot registers zero photons and
    the resulting M-way tie is guessed wrong: ``(M - 1) e^{-Ks} / M``.
    """
    m = check_order(m)
    if ks < 0:
        raise ValueError("Ks must be non-negative")
    return (m - 1) * math.exp(-ks) / m
