"""PPM order, code rate and required-power selection."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

from scipy.optimize import bisect

from .capacity import saturation_rate, soft_capacity
from .ppm import PpmConfig, check_order
from .quantities import db_to_linear

POWER_BRACKET = (1e-20, 1e-3)  # W


class InfeasibleDesign(Exception):
    """No transmitter configuration can meet the request."""


@dataclass(frozen=True)
class DesignConstraints:
    target_rate: float | None = None  # bit/s
    order_set: Sequence[int] = (16, 64, 256, 1024)
    slot_set: Sequence[float] = (2e-9, 0.25e-9)
    rate_set: Union[Sequence[float], str] = "continuous"
    coding_efficiency: float = 0.8  # fraction of capacity a real code reaches
    link_margin_db: float = 4.0

    def __post_init__(self):
        if not self.order_set or not self.slot_set:
            raise ValueError("order_set and slot_set must be non-empty")
        for m in self.order_set:
            check_order(m)
        if any(not t > 0 for t in self.slot_set):
            raise ValueError("slot times must be positive")
        if isinstance(self.rate_set, str):
            if self.rate_set != "continuous":
                raise ValueError("rate_set must be a list of rates or 'continuous'")
        elif not self.rate_set or any(not 0 < r <= 1 for r in self.rate_set):
            raise ValueError("rate_set must be non-empty with rates in (0, 1]")
        if self.target_rate is not None and not self.target_rate > 0:
            raise ValueError("target_rate must be positive")
        if not 0 < self.coding_efficiency <= 1:
            raise ValueError("coding_efficiency must lie in (0, 1]")
        if self.link_margin_db < 0:
            raise ValueError("link_margin_db must be >= 0")

    @property
    def capacity_discount(self) -> float:
        """Fraction of soft capacity usable once coding gap and margin are paid."""
        return self.coding_efficiency * db_to_linear(self.link_margin_db)


@dataclass(frozen=True)
class DesignSolution:
    order: int
    slot_time: float
    code_rate: float
    achieved_rate: float  # bit/s
    capacity_at_point: float  # bit/s
    required_power: float | None = None  # W
    feasible: bool = True

    @property
    def ppm(self) -> PpmConfig:
        return PpmConfig(self.order, self.slot_time, self.code_rate)


@dataclass(frozen=True)
class SearchResult:
    best: DesignSolution | None
    candidates: list = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.best is not None


def optimal_order(pr: float, pn: float, t_slot: float, energy: float,
                  order_set: Sequence[int]) -> int:
    """Order in ``order_set`` with the highest soft capacity; ties go to smaller M."""
    if not order_set:
        raise ValueError("order_set must be non-empty")
    return min(order_set, key=lambda m: (-soft_capacity(pr, pn, energy, m, t_slot), m))


def ecc_rate_for_target(target_rate: float, m: int, t_slot: float) -> float:
    """Code rate that turns M-PPM at ``t_slot`` into ``target_rate`` bit/s."""
    if not target_rate > 0:
        raise ValueError("target_rate must be positive")
    r = target_rate / saturation_rate(check_order(m), t_slot)
    if r > 1:
        raise InfeasibleDesign(
            f"{target_rate:.4g} bit/s exceeds the uncoded {m}-PPM rate "
            f"{saturation_rate(m, t_slot):.4g} bit/s")
    return r


def required_power(target_rate: float, m: int, t_slot: float, pn: float, energy: float,
                   rel_tol: float = 1e-4, bracket=POWER_BRACKET) -> float:
    """Received power at which the soft capacity equals ``target_rate``.

    Capacity is strictly increasing in Pr, so the root is unique and
    bisection on the bracket finds it.
    """
    if target_rate <= 0:
        return 0.0
    if target_rate >= saturation_rate(m, t_slot):
        raise InfeasibleDesign(
            f"{target_rate:.4g} bit/s is at or above {m}-PPM saturation "
            f"{saturation_rate(m, t_slot):.4g} bit/s")
    lo, hi = bracket

    def gap(pr):
        return soft_capacity(pr, pn, energy, m, t_slot) - target_rate

    if gap(lo) >= 0:
        return lo
    if gap(hi) < 0:
        raise InfeasibleDesign(f"target needs more than {hi:g} W")
    return bisect(gap, lo, hi, xtol=1e-300, rtol=rel_tol, maxiter=2000)


def design_for_rate(target_rate: float, t_slot: float, pn: float, energy: float,
                    order_set: Sequence[int] = (2, 4, 8, 16, 32, 64, 128, 256, 512, 1024),
                    rule: str = "max_order", rel_tol: float = 1e-4) -> DesignSolution:
    """Pick an order and code rate for a target data rate, then size the power.

    ``rule="max_order"`` switches to the largest order whose uncoded rate
    still reaches the target (the most photon-efficient usable order).
    ``rule="min_power"`` instead picks the order that needs the least
    received power.
    """
    usable = sorted(m for m in set(order_set) if saturation_rate(m, t_slot) > target_rate)
    if not usable:
        raise InfeasibleDesign(f"no order in {sorted(order_set)} reaches {target_rate:.4g} bit/s")
    if rule == "max_order":
        m = usable[-1]
        power = required_power(target_rate, m, t_slot, pn, energy, rel_tol)
    elif rule == "min_power":
        powers = {k: required_power(target_rate, k, t_slot, pn, energy, rel_tol) for k in usable}
        m = min(usable, key=lambda k: (powers[k], k))
        power = powers[m]
    else:
        raise ValueError(f"unknown rule {rule!r}")
    r = ecc_rate_for_target(target_rate, m, t_slot)
    return DesignSolution(m, t_slot, r, target_rate, target_rate, power, True)


PowerSource = Union[tuple, Callable[[PpmConfig], tuple]]


def _evaluate(m, t, powers, energy, c: DesignConstraints) -> list:
    peak = saturation_rate(m, t)
    if callable(powers):
        # Detected power depends on the code rate through jitter loss. A
        # continuous rate is probed at R = 1, the worst case for jitter.
        probe_rates = [1.0] if c.rate_set == "continuous" else sorted(c.rate_set)
    else:
        probe_rates = [None]
    out = []
    for probe in probe_rates:
        if callable(powers):
            pr, pn = powers(PpmConfig(m, t, probe))
        else:
            pr, pn = powers
        cap = soft_capacity(pr, pn, energy, m, t)
        usable = cap * c.capacity_discount
        if c.rate_set == "continuous":
            rates = [min(1.0, usable / peak)]
        else:
            rates = sorted(c.rate_set) if probe is None else [probe]
        for r in rates:
            rate = r * peak
            ok = r > 0 and rate <= usable * (1 + 1e-12)
            if c.target_rate is not None:
                ok = ok and rate >= c.target_rate * (1 - 1e-12)
            out.append(DesignSolution(m, t, r, rate, cap, None, ok))
    return out


def _rank(s: DesignSolution):
    return (-s.achieved_rate, s.order, -s.slot_time, -s.code_rate)


def ccsds_search(powers: PowerSource, constraints: DesignConstraints, energy: float) -> SearchResult:
    """Exhaustive search over (M, T_slot, R_ecc) for the highest feasible rate.

    ``powers`` is either a fixed ``(pr, pn)`` pair or a callable mapping a
    :class:`PpmConfig` to ``(pr, pn)`` (for end-to-end links whose detected
    power depends on the waveform). A combination is feasible when its
    rate is within the capacity after coding efficiency and link margin
    and, when a target rate is set, reaches that target.
    Ties prefer smaller M, then longer slots. Returns ``best=None`` when
    nothing is feasible.
    """
    candidates = []
    for m in constraints.order_set:
        for t in constraints.slot_set:
            candidates.extend(_evaluate(m, t, powers, energy, constraints))
    feasible = [s for s in candidates if s.feasible]
    best = min(feasible, key=_rank) if feasible else None
    return SearchResult(best, candidates)
