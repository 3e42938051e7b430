"""Stochastic cross-checks for the analytic PPM error rate and blocking loss.

Trials are split into fixed-size partitions, each with its own Philox
stream spawned from the user seed. Partitioning depends only on the
configuration, so results are bit-identical for any worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .ppm import PoissonSlotModel, PpmConfig

_CHUNK_ELEMENTS = 1 << 21  # slot draws per partition


@dataclass(frozen=True)
class SimConfig:
    trials: int
    seed: int
    ppm: PpmConfig
    slot_model: PoissonSlotModel

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError("trials must be a positive integer")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class SerEstimate:
    estimate: float
    stderr: float
    errors: int
    trials: int
    seed: int


@dataclass(frozen=True)
class BlockingEstimate:
    ratio: float
    counted: int
    arrived: int
    seed: int


def _partitions(total: int, per_chunk: int):
    full, rest = divmod(total, per_chunk)
    return [per_chunk] * full + ([rest] if rest else [])


def _ser_chunk(n: int, m: int, ks: float, kb: float, seed_seq) -> int:
    rng = np.random.Generator(np.random.Philox(seed_seq))
    counts = np.zeros((n, m))
    # Slot 0 carries the pulse; tie-breaking is symmetric so position is immaterial.
    counts[:, 0] = rng.poisson(ks + kb, n)
    if kb > 0:
        counts[:, 1:] = rng.poisson(kb, (n, m - 1))
    # Counts are integers, so a uniform [0, 1) key breaks ties uniformly at random.
    counts += rng.random((n, m))
    return int(np.count_nonzero(np.argmax(counts, axis=1) != 0))


def simulate_ser(cfg: SimConfig, workers: int = 1) -> SerEstimate:
    """Monte Carlo symbol error rate of ML (max-count) PPM detection."""
    m = cfg.ppm.order
    ks = cfg.slot_model.signal_mean_per_pulse
    kb = cfg.slot_model.noise_mean_per_slot
    sizes = _partitions(cfg.trials, max(1, _CHUNK_ELEMENTS // m))
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(sizes))
    jobs = list(zip(sizes, seeds))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            errors = sum(pool.map(lambda j: _ser_chunk(j[0], m, ks, kb, j[1]), jobs))
    else:
        errors = sum(_ser_chunk(n, m, ks, kb, s) for n, s in jobs)
    p = errors / cfg.trials
    return SerEstimate(p, math.sqrt(p * (1 - p) / cfg.trials), errors, cfg.trials, cfg.seed)


def simulate_blocking(flux: float, dead_time: float, horizon: float, seed: int) -> BlockingEstimate:
    """Throughput ratio of a non-paralyzable detector under Poisson arrivals.

    An arrival is counted when no counted arrival occurred within the
    preceding ``dead_time``.
    """
    if flux < 0 or dead_time < 0 or not horizon > 0:
        raise ValueError("flux and dead_time must be >= 0 and horizon > 0")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    n = int(rng.poisson(flux * horizon))
    if n == 0:
        return BlockingEstimate(1.0, 0, 0, seed)
    times = np.sort(rng.uniform(0.0, horizon, n))
    if dead_time == 0:
        return BlockingEstimate(1.0, n, n, seed)
    # Index of the first arrival at or after each arrival's dead window.
    reopen = np.searchsorted(times, times + dead_time, side="left").tolist()
    counted, i = 0, 0
    while i < n:
        counted += 1
        i = reopen[i]
    return BlockingEstimate(counted / n, counted, n, seed)
