"""Mission presets, planet catalog, end-to-end link evaluation and sweeps.

Configuration files are flat ``key = value`` text with ``#`` comments. Keys
are the :class:`MissionPreset` field names; each key has a fixed unit given
by its suffix (``_nm``, ``_m``, ``_db``, ``_ns``, ...). List-valued keys take
comma-separated values.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Iterable, Sequence

from .capacity import CapacityReport, OperatingPoint, ppm_pc_capacity
from .detector import Detection, PhotonCountingDetector, detect
from .link_budget import (ComputedPointing, FixedPointing, LinkBudget, LinkScenario,
                          PathEnvironment, Terminal, budget)
from .noise import (BackgroundEnvironment, DetectorNoiseParams, ReceiverOptics,
                    background_power, noise_power)
from .ppm import PpmConfig
from .quantities import AU, SPEED_OF_LIGHT, photon_energy


@dataclass(frozen=True)
class PlanetEntry:
    name: str
    average_distance: float  # m
    min_distance: float | None = None
    max_distance: float | None = None

    def __post_init__(self):
        if not self.average_distance > 0:
            raise ValueError("distance must be positive")

    def distance(self, which: str = "average") -> float:
        d = getattr(self, f"{which}_distance")
        if d is None:
            raise ValueError(f"no {which} distance recorded for {self.name}")
        return d


PLANETS = (
    PlanetEntry("Mercury", 58e9),
    PlanetEntry("Mars", 225e9, min_distance=0.36 * AU, max_distance=2.68 * AU),
    PlanetEntry("Jupiter", 778e9),
    PlanetEntry("Saturn", 1.2e12),
    PlanetEntry("Neptune", 4.5e12),
    PlanetEntry("Pluto", 5.9e12),
)
# Other quoted "farthest Mars" figures; the OAM divergence study uses 401 Mkm.
MARS_FARTHEST_QUOTED = 410e9
MARS_FARTHEST_FIGURE = 401e9

# Tabulated received powers (W) for one PPM-PC detector at each planet's
# average distance, paired with Pn = 1.1620e-16 W, M = 16, T_slot = 0.25 ns.
REFERENCE_RECEIVED_POWER = {
    "Mercury": 5.1856e-12,
    "Mars": 4.5053e-12,
    "Jupiter": 1.7741e-12,
    "Saturn": 9.2772e-13,
    "Neptune": 7.8951e-14,
    "Pluto": 4.6219e-14,
}
REFERENCE_NOISE_POWER = 1.1620e-16


def planet(name: str) -> PlanetEntry:
    for p in PLANETS:
        if p.name.lower() == name.lower():
            return p
    raise ValueError(f"unknown planet {name!r}")


def one_way_delay(distance: float) -> float:
    """Light travel time in seconds."""
    if distance < 0:
        raise ValueError("distance must be non-negative")
    return distance / SPEED_OF_LIGHT


def figure_of_merit(distance_au: float, rate: float, aperture: float, power: float) -> float:
    """``10 * distance^2 * rate / (aperture * power)`` with distance in AU."""
    if not aperture > 0 or not power > 0:
        raise ValueError("aperture and power must be positive")
    return 10 * distance_au**2 * rate / (aperture * power)


@dataclass(frozen=True)
class MissionPreset:
    """Mars-link parameter record. Field suffixes carry the unit."""

    wavelength_nm: float = 1550.0
    range_au: tuple = (0.36, 2.68)
    elevation_angle_deg: float = 20.0
    transmit_power_w: float = 4.0
    transmitter_diameter_m: float = 0.22
    transmitter_secondary_diameter_m: float = 0.0
    transmitter_efficiency: float = 0.6
    receiver_diameter_m: tuple = (4.0, 6.0, 8.0, 10.0)
    receiver_secondary_aperture_m: float = 0.0
    receiver_efficiency: float = 0.4
    receiver_quantum_efficiency: float = 0.5
    focal_length_of_the_receiver_m: float = 16.0
    detector_diameter_m: float = 30e-6
    optical_filter_um: float = 0.2e-3
    atmospheric_efficiency_vertical: float = 0.98
    link_margin_db: float = 4.0
    pointing_rms_error_urad: float = 0.7
    probability_level: float = 1e-14
    modulation_numbers: tuple = (16, 64, 256, 1024)
    slot_time_ns: tuple = (2.0, 0.25)
    coding_ratio: float = 0.5
    background_noise_reduction: float = 0.5
    coding_efficiency: float = 0.8
    radiance_of_planets_sky: float = 85.0  # W/m^2/sr/um
    leakage_ratio: float = 0.0
    detector_array: int = 1
    detector_dark_rate: float = 1e12  # e/s/m^2
    blocking_time_ns: float = 50.0
    jitter_time_ns: float = 240.0
    atmospheric_transmittance: float = 0.943
    scintillation_loss_db: float = 0.01
    pointing_loss_db: float = 1.95
    cirrus_loss_db: float = 0.5
    # Not part of the tabulated record.
    pointing_mode: str = "fixed"  # fixed | computed
    star_irradiance: float = 0.0  # W/m^2/um
    jitter_model: str = "linear"  # linear | quadratic

    def __post_init__(self):
        if self.pointing_mode not in ("fixed", "computed"):
            raise ValueError("pointing_mode must be 'fixed' or 'computed'")
        if self.jitter_model not in ("linear", "quadratic"):
            raise ValueError("jitter_model must be 'linear' or 'quadratic'")
        if not self.receiver_diameter_m or not self.modulation_numbers or not self.slot_time_ns:
            raise ValueError("list-valued parameters must be non-empty")
        # Build every component once so bad values fail early.
        self.scenario(1e9, self.receiver_diameter_m[0])
        self.noise_params()
        self.detector()
        self.background()
        for m in self.modulation_numbers:
            for t in self.slot_time_ns:
                PpmConfig(m, t * 1e-9, self.coding_ratio)

    @property
    def wavelength(self) -> float:
        return self.wavelength_nm * 1e-9

    @property
    def energy(self) -> float:
        return photon_energy(self.wavelength)

    @property
    def slot_times(self) -> tuple:
        return tuple(t * 1e-9 for t in self.slot_time_ns)

    def tx(self) -> Terminal:
        return Terminal(self.transmitter_diameter_m, self.transmitter_secondary_diameter_m,
                        self.transmitter_efficiency)

    def rx(self, diameter: float) -> Terminal:
        return Terminal(diameter, self.receiver_secondary_aperture_m, self.receiver_efficiency)

    def environment(self) -> PathEnvironment:
        if self.pointing_mode == "fixed":
            pointing = FixedPointing(self.pointing_loss_db)
        else:
            pointing = ComputedPointing(self.pointing_rms_error_urad * 1e-6, self.probability_level)
        return PathEnvironment(self.atmospheric_transmittance, self.cirrus_loss_db,
                               self.scintillation_loss_db, pointing, self.link_margin_db)

    def scenario(self, distance: float, rx_diameter: float) -> LinkScenario:
        return LinkScenario(self.tx(), self.rx(rx_diameter), self.environment(),
                            distance, self.wavelength, self.transmit_power_w)

    def optics(self, rx_diameter: float) -> ReceiverOptics:
        return ReceiverOptics.for_aperture(
            self.focal_length_of_the_receiver_m, self.detector_diameter_m, rx_diameter,
            self.receiver_efficiency, self.receiver_secondary_aperture_m)

    def background(self) -> BackgroundEnvironment:
        return BackgroundEnvironment(
            sky_radiance=self.radiance_of_planets_sky, star_irradiance=self.star_irradiance,
            filter_width=self.optical_filter_um, background_reduction=self.background_noise_reduction)

    def noise_params(self) -> DetectorNoiseParams:
        return DetectorNoiseParams(self.detector_dark_rate, self.detector_array,
                                   self.leakage_ratio, self.receiver_quantum_efficiency)

    def detector(self) -> PhotonCountingDetector:
        return PhotonCountingDetector(
            self.receiver_quantum_efficiency, self.blocking_time_ns * 1e-9,
            self.jitter_time_ns * 1e-9, jitter_quadratic=self.jitter_model == "quadratic")

    # -- config files ---------------------------------------------------

    @classmethod
    def from_mapping(cls, values: dict) -> "MissionPreset":
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, raw in values.items():
            if key not in known:
                raise ValueError(f"unknown configuration key {key!r}")
            kwargs[key] = _coerce(known[key], raw)
        return cls(**kwargs)

    @classmethod
    def from_config(cls, path, overrides: dict | None = None) -> "MissionPreset":
        values = parse_config(Path(path).read_text(encoding="utf-8")) if path else {}
        values.update(overrides or {})
        return cls.from_mapping(values)

    def with_overrides(self, **kw) -> "MissionPreset":
        return replace(self, **kw)

    def resolved(self) -> list[tuple[str, str]]:
        return [(f.name, _render(getattr(self, f.name))) for f in fields(self)]

    def to_config(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in self.resolved())


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key or not value:
            raise ValueError(f"line {lineno}: empty key or value")
        if key in out:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _coerce(f, raw):
    if not isinstance(raw, str):
        return raw
    default = f.default
    try:
        if isinstance(default, tuple):
            item = int if all(isinstance(x, int) for x in default) else float
            return tuple(item(v.strip()) for v in raw.split(",") if v.strip())
        if isinstance(default, bool):
            return raw.lower() in ("1", "true", "yes")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
    except ValueError:
        raise ValueError(f"bad value for {f.name}: {raw!r}") from None
    return raw


def _render(v) -> str:
    if isinstance(v, tuple):
        return ", ".join(_render(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


# -- end-to-end pipeline ------------------------------------------------

@dataclass(frozen=True)
class LinkEvaluation:
    distance: float
    rx_diameter: float
    ppm: PpmConfig
    link: LinkBudget
    background_power: float
    noise_power: float
    detection: Detection
    fed_power: float  # power handed to the capacity formula
    capacity: CapacityReport


def evaluate_link(preset: MissionPreset, distance: float, rx_diameter: float,
                  ppm: PpmConfig, feed: str = "detected") -> LinkEvaluation:
    """Link budget, noise, detection and capacity for one operating point.

    ``feed="detected"`` passes the detector output power to the capacity
    formula; ``feed="pre_detection"`` passes the telescope output instead.
    """
    if feed not in ("detected", "pre_detection"):
        raise ValueError("feed must be 'detected' or 'pre_detection'")
    e = preset.energy
    lb = budget(preset.scenario(distance, rx_diameter))
    pr_ap = lb.received_power
    optics = preset.optics(rx_diameter)
    pb = background_power(preset.background(), optics)
    pn = noise_power(pb, preset.noise_params(), optics, e, pr_ap)
    det = detect(pr_ap, pn, e, preset.detector(), ppm.slot_time, ppm.code_rate, ppm.order)
    fed = det.p_det if feed == "detected" else pr_ap
    cap = ppm_pc_capacity(OperatingPoint(fed, pn, e, ppm, pre_detection=feed != "detected"))
    return LinkEvaluation(distance, rx_diameter, ppm, lb, pb, pn, det, fed, cap)


SWEEP_HEADER = ("distance_m", "D_r", "M", "T_slot", "Pr_W", "Pn_W", "capacity_bps", "regime")


def capacity_vs_distance_sweep(preset: MissionPreset, distance_grid: Iterable[float],
                               orders: Sequence[int] | None = None,
                               diameters: Sequence[float] | None = None,
                               slots: Sequence[float] | None = None,
                               feed: str = "detected") -> list[tuple]:
    """Rows of :data:`SWEEP_HEADER` in (distance, D_r, M, T_slot) grid order."""
    orders = preset.modulation_numbers if orders is None else orders
    diameters = preset.receiver_diameter_m if diameters is None else diameters
    slots = preset.slot_times if slots is None else slots
    rows = []
    for d in distance_grid:
        for dr in diameters:
            for m in orders:
                for t in slots:
                    ev = evaluate_link(preset, d, dr, PpmConfig(m, t, preset.coding_ratio), feed)
                    rows.append((float(d), float(dr), int(m), float(t), float(ev.fed_power),
                                 float(ev.noise_power), ev.capacity.capacity,
                                 ev.capacity.regime.value))
    return rows


PLANETS_HEADER = ("planet", "distance_m", "Pr_W", "capacity_bps", "delay_min")


def planets_table(pr_values: dict | Sequence[tuple], pn: float = REFERENCE_NOISE_POWER,
                  m: int = 16, t_slot: float = 0.25e-9, wavelength: float = 1550e-9) -> list[tuple]:
    """Capacity and one-way delay per planet for supplied received powers."""
    items = pr_values.items() if isinstance(pr_values, dict) else pr_values
    e = photon_energy(wavelength)
    cfg = PpmConfig(m, t_slot)
    rows = []
    for name, pr in items:
        body = planet(name)
        rep = ppm_pc_capacity(OperatingPoint(pr, pn, e, cfg, pre_detection=True))
        rows.append((body.name, body.average_distance, float(pr), rep.capacity,
                     one_way_delay(body.average_distance) / 60))
    return rows


# -- CSV ----------------------------------------------------------------

def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v) or math.isinf(v):
            return str(v)
        return f"{v:.9e}"
    return str(v)


def write_csv(header: Sequence[str], rows: Iterable[Sequence], out=None) -> str:
    """Render rows as CSV (header first, ``\\n`` line endings); optionally write to ``out``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_value(v) for v in row])
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text
