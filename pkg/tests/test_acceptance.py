"""Acceptance gate. Each test carries a ``criterion`` marker; the summary
at the end of the run prints one PASS/FAIL line per criterion."""
from __future__ import annotations

import math
import time

import numpy as np
import pytest

from dsoclink.capacity import OperatingPoint, Regime, ppm_pc_capacity, saturation_rate, soft_capacity
from dsoclink.cli import main
from dsoclink.designer import design_for_rate
from dsoclink.link_budget import free_space_loss
from dsoclink.montecarlo import SimConfig, simulate_blocking, simulate_ser
from dsoclink.noise import (NIGHT_SKY_RADIANCE, BackgroundEnvironment, DetectorNoiseParams,
                            ReceiverOptics, background_power, dark_power, noise_power)
from dsoclink.oam import LgBeamSpec, beam_radius, mm_bits_per_symbol, profile, ring_radius
from dsoclink.ppm import PoissonSlotModel, PpmConfig, symbol_error_probability
from dsoclink.quantities import photon_energy, to_db
from dsoclink.scenarios import (REFERENCE_NOISE_POWER, REFERENCE_RECEIVED_POWER, MissionPreset,
                                capacity_vs_distance_sweep, planets_table)

E = photon_energy(1550e-9)

CAPACITY_MBPS = {"Mercury": 139.45, "Mars": 123.42, "Jupiter": 52.527, "Saturn": 28.173,
                 "Neptune": 2.4598, "Pluto": 1.4409}
DELAY_MIN = {"Mercury": 3.22, "Mars": 12.5, "Jupiter": 43.22, "Saturn": 66.67,
             "Neptune": 250.0, "Pluto": 327.77}

CAPACITY_REL_TOL = 5e-3
DELAY_ABS_MIN = 0.5
FSL_DB, FSL_TOL_DB = -365.22, 0.05
DARK_W, DARK_REL_TOL = 1.1535e-16, 1e-3
NOISE_W, NOISE_REL_TOL = 1.1620e-16, 0.01
SATURATION_REL_TOL = 1e-3
SLOPE_REL_TOL = 0.05
R_ECC, R_ECC_TOL = 0.597, 0.01
MC_TRIALS, MC_SIGMAS, BLOCKING_REL_TOL = 1_000_000, 3.0, 0.02
WAIST_RADIUS_AT_MARS, WAIST_REL_TOL = 3.957e5, 5e-3


def _report(number, ok, detail):
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")


@pytest.mark.criterion(1, "planet capacity reproduction")
def test_criterion_01_planet_capacities():
    t0 = time.perf_counter()
    rows = planets_table(REFERENCE_RECEIVED_POWER, REFERENCE_NOISE_POWER, 16, 0.25e-9, 1550e-9)
    elapsed = time.perf_counter() - t0
    errors = {name: c / 1e6 / CAPACITY_MBPS[name] - 1 for name, _, _, c, _ in rows}
    worst = max(abs(v) for v in errors.values())
    ok = worst <= CAPACITY_REL_TOL and len(rows) == 6 and elapsed < 1.0
    _report(1, ok, f"worst relative error {worst:.3%}, {elapsed:.3f} s")
    assert len(rows) == 6
    assert worst <= CAPACITY_REL_TOL, errors
    assert elapsed < 1.0


@pytest.mark.criterion(2, "delay reproduction")
def test_criterion_02_delays():
    t0 = time.perf_counter()
    rows = planets_table(REFERENCE_RECEIVED_POWER)
    elapsed = time.perf_counter() - t0
    errors = {name: delay - DELAY_MIN[name] for name, _, _, _, delay in rows}
    worst = max(abs(v) for v in errors.values())
    _report(2, worst <= DELAY_ABS_MIN and elapsed < 1.0, f"worst error {worst:.3f} min")
    assert worst <= DELAY_ABS_MIN, errors
    assert elapsed < 1.0


@pytest.mark.criterion(3, "free-space path-loss anchor")
def test_criterion_03_path_loss():
    db = to_db(free_space_loss(225e9, 1550e-9))
    _report(3, abs(db - FSL_DB) <= FSL_TOL_DB, f"{db:.3f} dB")
    assert db == pytest.approx(FSL_DB, abs=FSL_TOL_DB)
    assert 365 < -db < 366


@pytest.mark.criterion(4, "noise anchor")
def test_criterion_04_noise():
    optics = ReceiverOptics.for_aperture(16.0, 30e-6, 4.0, 0.4)
    params = DetectorNoiseParams(1e12, 1, 0.0, 0.5)
    dark = dark_power(params, optics, E)
    night = BackgroundEnvironment(sky_radiance=NIGHT_SKY_RADIANCE, filter_width=0.2e-3,
                                  background_reduction=0.5)
    total = noise_power(background_power(night, optics), params, optics, E,
                        REFERENCE_RECEIVED_POWER["Mars"])
    ok = abs(dark / DARK_W - 1) <= DARK_REL_TOL and abs(total / NOISE_W - 1) <= NOISE_REL_TOL
    _report(4, ok, f"dark {dark:.5e} W, total {total:.5e} W")
    assert dark == pytest.approx(DARK_W, rel=DARK_REL_TOL)
    assert total == pytest.approx(NOISE_W, rel=NOISE_REL_TOL)


@pytest.mark.criterion(5, "saturation property")
def test_criterion_05_saturation():
    t = 0.25e-9
    ratios = {m: soft_capacity(1e-3, REFERENCE_NOISE_POWER, E, m, t) / (math.log2(m) / (m * t))
              for m in (16, 64, 256, 1024)}
    worst = max(abs(r - 1) for r in ratios.values())
    c16 = soft_capacity(1e-3, REFERENCE_NOISE_POWER, E, 16, t)
    _report(5, worst <= SATURATION_REL_TOL, f"worst {worst:.2e}, M=16 at {c16 / 1e9:.6f} Gbps")
    assert c16 == pytest.approx(1e9, rel=SATURATION_REL_TOL)
    assert worst <= SATURATION_REL_TOL


@pytest.mark.criterion(6, "regime property suite")
def test_criterion_06_regimes():
    pn, cfg = REFERENCE_NOISE_POWER, PpmConfig(16, 0.25e-9)

    def report(pr):
        return ppm_pc_capacity(OperatingPoint(pr, pn, E, cfg))

    sweep = np.geomspace(1e-22, 1e-2, 241)
    labels = [report(p).regime for p in sweep]
    visited = [labels[0]] + [b for a, b in zip(labels, labels[1:]) if b != a]
    quad_lo = 1e-4 * pn  # deep in the noise-limited window
    lin_lo = 1e-15  # deep in the quantum-limited window
    quad = report(10 * quad_lo).capacity / report(quad_lo).capacity
    lin = report(10 * lin_lo).capacity / report(lin_lo).capacity
    sat = report(1e-2).capacity / saturation_rate(16, 0.25e-9)
    ok = (visited == [Regime.NOISE_LIMITED, Regime.QUANTUM_LIMITED, Regime.BANDWIDTH_LIMITED]
          and abs(quad / 100 - 1) <= SLOPE_REL_TOL and abs(lin / 10 - 1) <= SLOPE_REL_TOL
          and sat > 0.999)
    _report(6, ok, f"x{quad:.2f}/decade, x{lin:.3f}/decade, saturation {sat:.5f}")
    assert visited == [Regime.NOISE_LIMITED, Regime.QUANTUM_LIMITED, Regime.BANDWIDTH_LIMITED]
    assert report(quad_lo).regime == Regime.NOISE_LIMITED
    assert report(lin_lo).regime == Regime.QUANTUM_LIMITED
    assert quad == pytest.approx(100, rel=SLOPE_REL_TOL)
    assert lin == pytest.approx(10, rel=SLOPE_REL_TOL)
    assert sat > 0.999


@pytest.mark.criterion(7, "designer worked example")
def test_criterion_07_designer():
    sol = design_for_rate(56e6, 1e-9, 2.1e-14, E)
    ok = sol.order == 64 and abs(sol.code_rate - R_ECC) <= R_ECC_TOL
    _report(7, ok, f"M*={sol.order}, R_ecc={sol.code_rate:.4f}, Pr={sol.required_power:.3e} W")
    assert sol.order == 64
    assert sol.code_rate == pytest.approx(R_ECC, abs=R_ECC_TOL)


@pytest.mark.criterion(8, "Monte Carlo oracle equivalence")
def test_criterion_08_monte_carlo():
    t0 = time.perf_counter()
    worst_sigma = 0.0
    for i, m in enumerate((2, 4, 16, 64, 256)):
        for j, ks in enumerate((0.5, 1.0, 2.0, 4.0, 7.0)):
            est = simulate_ser(SimConfig(MC_TRIALS, 1000 + 10 * i + j, PpmConfig(m, 1e-9),
                                         PoissonSlotModel(ks)))
            z = abs(est.estimate - symbol_error_probability(m, ks)) / est.stderr
            worst_sigma = max(worst_sigma, z)
    worst_block = 0.0
    flux = 1e6
    for lt in (0.1, 0.5, 1.0, 2.0, 5.0):
        est = simulate_blocking(flux, lt / flux, 1.0, 77)
        worst_block = max(worst_block, abs(est.ratio * (1 + lt) - 1))
    elapsed = time.perf_counter() - t0
    ok = worst_sigma <= MC_SIGMAS and worst_block <= BLOCKING_REL_TOL and elapsed < 60
    _report(8, ok, f"worst SER {worst_sigma:.2f} sigma, worst blocking {worst_block:.3%}, "
                   f"{elapsed:.1f} s")
    assert worst_sigma <= MC_SIGMAS
    assert worst_block <= BLOCKING_REL_TOL
    assert elapsed < 60


@pytest.mark.criterion(9, "capacity-vs-distance sweep structure")
def test_criterion_09_sweep():
    orders = (16, 64, 256, 1024)
    grid = np.geomspace(500e9, 10e12, 40)
    t0 = time.perf_counter()
    rows = capacity_vs_distance_sweep(MissionPreset(), grid, orders, (4.0,), (0.25e-9,))
    elapsed = time.perf_counter() - t0
    leaders = [max(rows[k * 4:(k + 1) * 4], key=lambda r: r[6])[2] for k in range(len(grid))]
    near, far = leaders[0], leaders[-1]
    crossover = any(a == 16 and b == 64 for a, b in zip(leaders, leaders[1:]))
    ok = near == 16 and crossover and far == 1024 and elapsed < 10
    _report(9, ok, f"leaders near={near}, far={far}, 16->64 crossover={crossover}, "
                   f"{elapsed:.2f} s")
    assert elapsed < 10
    assert near == 16
    assert crossover
    assert far == 1024
    assert all(a <= b for a, b in zip(leaders, leaders[1:]))


@pytest.mark.criterion(10, "OAM properties")
def test_criterion_10_oam():
    z = 4.01e11
    steps = []
    for l in range(9):
        spec = LgBeamSpec(l, 0, 0.5, 1550e-9)
        prof = profile(spec, z, n=4001)
        step = prof.radii[1] - prof.radii[0]
        steps.append(abs(prof.peak_radius - ring_radius(spec, z)) / step)
    w = beam_radius(LgBeamSpec(0, 0, 0.5, 1550e-9), z)
    bits = mm_bits_per_symbol(2, 2)
    ok = max(steps) <= 1 and abs(w / WAIST_RADIUS_AT_MARS - 1) <= WAIST_REL_TOL and bits == 2
    _report(10, ok, f"peak offset {max(steps):.2f} steps, w(z)={w:.4e} m, MM bits={bits}")
    assert max(steps) <= 1
    assert w == pytest.approx(WAIST_RADIUS_AT_MARS, rel=WAIST_REL_TOL)
    assert bits == 1 + 1


COMMANDS = [
    ["budget", "--planet", "Mars"],
    ["capacity", "--pr", "1e-14,4.5053e-12,1e-3", "--pn", "1.162e-16", "--order", "16,1024"],
    ["ser"],
    ["design", "--target", "56e6", "--pn", "2.1e-14"],
    ["design", "--search", "--planet", "Mars", "--all"],
    ["sweep", "--points", "4", "--diameters", "4,10"],
    ["planets"],
    ["oam", "--l", "3", "--samples", "101"],
    ["fom", "--distance-au", "1.5", "--rate", "1e6", "--aperture", "4", "--power", "4"],
    ["simulate", "ser", "--order", "16,64", "--ks", "1,3", "--trials", "20000"],
    ["simulate", "blocking", "--flux", "1e6", "--dead-time", "1e-7,1e-6", "--horizon", "0.2"],
]


@pytest.mark.criterion(11, "byte-identical CSV")
def test_criterion_11_determinism(tmp_path, capsys):
    mismatched = []
    for n, argv in enumerate(COMMANDS):
        outputs = []
        for rep in range(2):
            path = tmp_path / f"{n}_{rep}.csv"
            assert main(argv + ["--seed", "12345", "--out", str(path)]) == 0
            outputs.append(path.read_bytes())
        if outputs[0] != outputs[1] or not outputs[0]:
            mismatched.append(argv[0])
    capsys.readouterr()
    _report(11, not mismatched, f"{len(COMMANDS)} commands, mismatches: {mismatched or 'none'}")
    assert not mismatched
