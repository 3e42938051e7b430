"""Soft capacity of PPM over the photon-counting Poisson channel.

The approximation used throughout is

    C = Pr^2 / (ln2 E) / (2 Pn / (M-1) + Pr / ln M + Pr^2 M T_slot / (E ln M))

Each denominator term dominates in one regime: noise-limited (C ~ Pr^2),
quantum-limited (C ~ Pr) and bandwidth-limited (C saturates at the uncoded
PPM rate log2(M) / (M T_slot)).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

from .ppm import PpmConfig

HOLEVO_GAIN = 2.561


class Regime(str, Enum):
    NOISE_LIMITED = "noise_limited"
    QUANTUM_LIMITED = "quantum_limited"
    BANDWIDTH_LIMITED = "bandwidth_limited"


@dataclass(frozen=True)
class OperatingPoint:
    received_power: float  # W
    noise_power: float  # W
    photon_energy: float  # J
    ppm: PpmConfig
    # True when received_power was taken ahead of detection losses.
    pre_detection: bool = False

    def __post_init__(self):
        if self.received_power < 0:
            raise ValueError("received_power must be non-negative")
        if self.noise_power < 0:
            raise ValueError("noise_power must be non-negative")
        if not self.photon_energy > 0:
            raise ValueError("photon_energy must be positive")


@dataclass(frozen=True)
class CapacityReport:
    capacity: float  # bit/s
    regime: Regime
    term_noise: float
    term_quantum: float
    term_bandwidth: float
    pre_detection: bool = False


def capacity_terms(pr: float, pn: float, energy: float, m: int, t_slot: float):
    ln_m = math.log(m)
    return (
        2 * pn / (m - 1),
        pr / ln_m,
        pr * pr * m * t_slot / (ln_m * energy),
    )


def soft_capacity(pr: float, pn: float, energy: float, m: int, t_slot: float) -> float:
    """Bare capacity in bit/s; see :func:`ppm_pc_capacity` for the report form."""
    if pr == 0:
        return 0.0
    tn, tq, tb = capacity_terms(pr, pn, energy, m, t_slot)
    return pr * pr / (math.log(2) * energy * (tn + tq + tb))


def ppm_pc_capacity(op: OperatingPoint) -> CapacityReport:
    m, t = op.ppm.order, op.ppm.slot_time
    terms = capacity_terms(op.received_power, op.noise_power, op.photon_energy, m, t)
    cap = soft_capacity(op.received_power, op.noise_power, op.photon_energy, m, t)
    # Ties go to the lower-power regime, so Pr = 0 with Pn = 0 reads as noise-limited.
    regime = list(Regime)[max(range(3), key=lambda i: (terms[i], -i))]
    return CapacityReport(cap, regime, *terms, pre_detection=op.pre_detection)


def saturation_rate(m: int, t_slot: float) -> float:
    """Limit of the capacity as received power grows without bound."""
    return math.log2(m) / (m * t_slot)


def holevo_limit(c_pcr: float) -> float:
    """Holevo-bound estimate for a PPM photon-counting link of capacity ``c_pcr``."""
    if c_pcr < 0:
        raise ValueError("capacity must be non-negative")
    return HOLEVO_GAIN * c_pcr


def holevo_dimensional_efficiency(photon_efficiency: float) -> float:
    """Asymptotic Holevo trade-off ``e c_p 2^{-c_p}`` (modes/bit vs photons/bit).

    Reference curve for plots only.
    """
    return math.e * photon_efficiency * 2.0 ** (-photon_efficiency)


def ns_dimensional_factor(eta: float, scheme: str = "ppm", near_unity_threshold: float = 0.9,
                          branch: str | None = None) -> float:
    """Multiplicative factor F relating number-state capacity to Holevo.

    PPM uses ``F = eta / e``. OOK uses ``F = 2**f(eta)`` where ``f`` has a
    small-transmittivity branch ``eta / e`` and a near-unity branch
    ``(eta-1)**(eta-1) / e**(1-eta)``. ``branch`` forces ``"small"`` or
    ``"unity"``; otherwise ``near_unity_threshold`` picks one.

    Values of F above 1 are returned unclamped with a ``RuntimeWarning``.
    """
    if not 0 < eta <= 1:
        raise ValueError(f"transmittivity must lie in (0, 1], got {eta!r}")
    scheme = scheme.lower()
    if scheme == "ppm":
        return eta / math.e
    if scheme != "ook":
        raise ValueError(f"unknown scheme {scheme!r}")
    if branch is None:
        branch = "unity" if eta >= near_unity_threshold else "small"
    if branch == "small":
        f = eta / math.e
    elif branch == "unity":
        # Negative base with fractional exponent has no real value; use |eta-1|.
        # 0**0 == 1 in Python, matching the eta = 1 case.
        f = abs(eta - 1) ** (eta - 1) / math.exp(1 - eta)
    else:
        raise ValueError(f"unknown branch {branch!r}")
    factor = 2.0**f
    if factor > 1:
        warnings.warn(f"OOK number-state factor {factor:.4g} exceeds 1", RuntimeWarning, stacklevel=2)
    return factor
