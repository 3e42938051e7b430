"""Command-line interface.

Every subcommand writes CSV to ``--out`` (stdout by default) and first
echoes the resolved parameter set to stderr as ``# key = value`` lines.
Exit codes: 0 success, 1 infeasible design, 2 invalid input.
"""
from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager

import numpy as np

from . import capacity as cap
from . import designer, montecarlo, oam, ppm, scenarios
from .quantities import AU, photon_energy, to_db

EXIT_OK, EXIT_INFEASIBLE, EXIT_INVALID = 0, 1, 2


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _seed(text):
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _keyval(text):
    if "=" not in text:
        raise argparse.ArgumentTypeError("expected key=value")
    k, v = text.split("=", 1)
    return k.strip(), v.strip()


def _range_spec(text):
    parts = _floats(text.replace(":", ","))
    if len(parts) != 3 or parts[2] <= 0:
        raise argparse.ArgumentTypeError("expected start:stop:step with step > 0")
    start, stop, step = parts
    n = int(round((stop - start) / step)) + 1
    return [start + i * step for i in range(n)]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value parameter file")
    common.add_argument("--set", dest="overrides", action="append", type=_keyval, default=[],
                        metavar="KEY=VALUE", help="override one configuration key")
    common.add_argument("--out", default="-", help="output path, or - / stdout")
    common.add_argument("--seed", type=_seed, default=0)

    p = argparse.ArgumentParser(prog="dsoclink", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def where(sp):
        sp.add_argument("--distance", type=float, help="link range in m")
        sp.add_argument("--planet", help="use a catalog body instead of --distance")
        sp.add_argument("--which", choices=("average", "min", "max"), default="average")
        sp.add_argument("--rx-diameter", type=float, help="receiver diameter in m")

    s = sub.add_parser("budget", parents=[common], help="link budget, noise and detection breakdown")
    where(s)
    s.add_argument("--order", type=int, default=16)
    s.add_argument("--slot-ns", type=float, default=0.25)

    s = sub.add_parser("capacity", parents=[common], help="soft capacity at given powers")
    s.add_argument("--pr", type=_floats, required=True, help="received power(s) in W")
    s.add_argument("--pn", type=float, required=True, help="noise power in W")
    s.add_argument("--order", type=_ints, default=[16])
    s.add_argument("--slot-ns", type=float, default=0.25)
    s.add_argument("--pre-detection", action="store_true",
                   help="mark Pr as taken ahead of detection losses")

    s = sub.add_parser("ser", parents=[common], help="uncoded PPM symbol error rate")
    s.add_argument("--orders", type=_ints, default=[2, 4, 8, 16, 32, 64, 128, 256])
    s.add_argument("--ks-per-m-db", type=_range_spec, default=_range_spec("-15:0:1"),
                   metavar="START:STOP:STEP")

    s = sub.add_parser("design", parents=[common], help="order/code-rate selection")
    s.add_argument("--target", type=float, help="target data rate in bit/s")
    s.add_argument("--pn", type=float, help="noise power in W")
    s.add_argument("--pr", type=float, help="received power in W (search mode)")
    s.add_argument("--slot-ns", type=float, default=1.0)
    s.add_argument("--orders", type=_ints)
    s.add_argument("--rule", choices=("max_order", "min_power"), default="max_order")
    s.add_argument("--search", action="store_true",
                   help="exhaustive (M, T_slot, R_ecc) search for the best feasible rate")
    s.add_argument("--rates", type=_floats, help="allowed code rates (default continuous)")
    s.add_argument("--all", action="store_true", help="list every searched combination")
    where(s)

    s = sub.add_parser("sweep", parents=[common], help="capacity versus distance")
    s.add_argument("--start", type=float, default=500e9)
    s.add_argument("--stop", type=float, default=10e12)
    s.add_argument("--points", type=int, default=50)
    s.add_argument("--spacing", choices=("log", "linear"), default="log")
    s.add_argument("--orders", type=_ints)
    s.add_argument("--diameters", type=_floats)
    s.add_argument("--slots-ns", type=_floats)
    s.add_argument("--feed", choices=("detected", "pre_detection"), default="detected")

    s = sub.add_parser("planets", parents=[common], help="capacity and delay per planet")
    s.add_argument("--pn", type=float, default=scenarios.REFERENCE_NOISE_POWER)
    s.add_argument("--order", type=int, default=16)
    s.add_argument("--slot-ns", type=float, default=0.25)
    s.add_argument("--source", choices=("reference", "budget"), default="reference",
                   help="tabulated received powers, or the preset link budget")
    s.add_argument("--rx-diameter", type=float)

    s = sub.add_parser("oam", parents=[common], help="LG beam profile at range")
    s.add_argument("--l", type=int, default=1)
    s.add_argument("--p", type=int, default=0)
    s.add_argument("--waist", type=float, help="beam waist in m (default: half of --tx-diameter)")
    s.add_argument("--tx-diameter", type=float, default=1.0)
    s.add_argument("--distance", type=float, default=scenarios.MARS_FARTHEST_FIGURE)
    s.add_argument("--samples", type=int, default=401)
    s.add_argument("--extent", type=float, default=4.0, help="radial extent in beam radii")
    s.add_argument("--raster", action="store_true", help="emit an (r, phi) grid instead")
    s.add_argument("--n-phi", type=int, default=72)

    s = sub.add_parser("fom", parents=[common], help="distance^2 rate / (aperture power) figure of merit")
    s.add_argument("--distance-au", type=float)
    s.add_argument("--distance", type=float, help="distance in m")
    s.add_argument("--rate", type=float, required=True)
    s.add_argument("--aperture", type=float, required=True)
    s.add_argument("--power", type=float, required=True)

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo oracles")
    sim = s.add_subparsers(dest="kind", required=True)
    a = sim.add_parser("ser", parents=[common])
    a.add_argument("--order", type=_ints, default=[16])
    a.add_argument("--ks", type=_floats, default=[3.0])
    a.add_argument("--kb", type=float, default=0.0)
    a.add_argument("--trials", type=int, default=100_000)
    a.add_argument("--workers", type=int, default=1)
    b = sim.add_parser("blocking", parents=[common])
    b.add_argument("--flux", type=float, required=True, help="photons/s")
    b.add_argument("--dead-time", type=_floats, required=True, help="s")
    b.add_argument("--horizon", type=float, help="s (default 1e6 / flux)")
    return p


@contextmanager
def _output(path):
    if path in ("-", "stdout"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _echo(preset, args):
    err = sys.stderr
    for k, v in preset.resolved():
        err.write(f"# {k} = {v}\n")
    for k, v in sorted(vars(args).items()):
        if k in ("config", "overrides"):
            continue
        err.write(f"# arg.{k} = {v}\n")


def _distance(args, preset):
    if args.planet:
        d = scenarios.planet(args.planet).distance(args.which)
    elif args.distance is not None:
        d = args.distance
    else:
        raise ValueError("give --distance or --planet")
    return d


def _rx(args, preset):
    return args.rx_diameter if args.rx_diameter is not None else preset.receiver_diameter_m[0]


def cmd_budget(args, preset):
    d, dr = _distance(args, preset), _rx(args, preset)
    cfg = ppm.PpmConfig(args.order, args.slot_ns * 1e-9, preset.coding_ratio)
    ev = scenarios.evaluate_link(preset, d, dr, cfg)
    rows = [("distance", d, "m", ""), ("rx_diameter", dr, "m", ""),
            ("tx_power", preset.transmit_power_w, "W", to_db(preset.transmit_power_w))]
    for name, v in ev.link.factors.items():
        rows.append((name, v, "1", to_db(v)))
    det = ev.detection
    rows += [
        ("received_power", float(ev.link.received_power), "W", ev.link.received_power_dbw),
        ("link_margin", ev.link.link_margin_db, "dB", ""),
        ("background_power", float(ev.background_power), "W", ""),
        ("noise_power", float(ev.noise_power), "W", ""),
        ("blocking", det.blocking, "1", -det.blocking_db),
        ("jitter_psi", det.psi, "1", ""),
        ("jitter", 10 ** (-det.jitter_db / 10), "1", -det.jitter_db),
        ("quantum_efficiency", det.quantum_efficiency, "1", to_db(det.quantum_efficiency)),
        ("detected_power", float(det.p_det), "W", to_db(det.p_det) if det.p_det > 0 else ""),
        ("capacity", ev.capacity.capacity, "bit/s", ""),
        ("regime", ev.capacity.regime.value, "", ""),
    ]
    return ("item", "value", "unit", "db"), rows


def cmd_capacity(args, preset):
    e = preset.energy
    rows = []
    for m in args.order:
        cfg = ppm.PpmConfig(m, args.slot_ns * 1e-9)
        for pr in args.pr:
            rep = cap.ppm_pc_capacity(cap.OperatingPoint(pr, args.pn, e, cfg, args.pre_detection))
            rows.append((m, cfg.slot_time, pr, args.pn, rep.capacity, rep.regime.value,
                         rep.term_noise, rep.term_quantum, rep.term_bandwidth,
                         cap.holevo_limit(rep.capacity), rep.pre_detection))
    header = ("M", "T_slot", "Pr_W", "Pn_W", "capacity_bps", "regime", "term_noise",
              "term_quantum", "term_bandwidth", "holevo_bps", "pre_detection")
    return header, rows


def cmd_ser(args, preset):
    rows = []
    for m in args.orders:
        for db in args.ks_per_m_db:
            ks = m * 10 ** (db / 10)
            rows.append((m, float(db), ks, ppm.symbol_error_probability(m, ks)))
    return ("M", "ks_per_m_db", "Ks", "ser"), rows


SOLUTION_HEADER = ("M", "T_slot", "R_ecc", "achieved_rate_bps", "capacity_bps",
                   "required_power_W", "feasible")


def _solution_row(s):
    return (s.order, s.slot_time, s.code_rate, s.achieved_rate, s.capacity_at_point,
            "" if s.required_power is None else float(s.required_power), s.feasible)


def cmd_design(args, preset):
    e = preset.energy
    if not args.search:
        if args.target is None or args.pn is None:
            raise ValueError("design needs --target and --pn (or --search)")
        orders = args.orders or (2, 4, 8, 16, 32, 64, 128, 256, 512, 1024)
        sol = designer.design_for_rate(args.target, args.slot_ns * 1e-9, args.pn, e, orders, args.rule)
        return SOLUTION_HEADER, [_solution_row(sol)]
    constraints = designer.DesignConstraints(
        target_rate=args.target,
        order_set=tuple(args.orders or preset.modulation_numbers),
        slot_set=preset.slot_times,
        rate_set=tuple(args.rates) if args.rates else "continuous",
        coding_efficiency=preset.coding_efficiency,
        link_margin_db=preset.link_margin_db,
    )
    if args.pr is not None:
        if args.pn is None:
            raise ValueError("--pr needs --pn")
        powers = (args.pr, args.pn)
    else:
        d, dr = _distance(args, preset), _rx(args, preset)

        def powers(cfg):
            ev = scenarios.evaluate_link(preset, d, dr, cfg)
            return ev.fed_power, ev.noise_power

    res = designer.ccsds_search(powers, constraints, e)
    if args.all:
        rows = [_solution_row(s) + (s == res.best,) for s in res.candidates]
        return SOLUTION_HEADER + ("selected",), rows, res.feasible
    return SOLUTION_HEADER, ([_solution_row(res.best)] if res.best else []), res.feasible


def cmd_sweep(args, preset):
    if args.points < 1 or not 0 < args.start <= args.stop:
        raise ValueError("need 0 < start <= stop and points >= 1")
    space = np.geomspace if args.spacing == "log" else np.linspace
    grid = space(args.start, args.stop, args.points)
    slots = [t * 1e-9 for t in args.slots_ns] if args.slots_ns else None
    rows = scenarios.capacity_vs_distance_sweep(preset, grid, args.orders, args.diameters,
                                                slots, args.feed)
    return scenarios.SWEEP_HEADER, rows


def cmd_planets(args, preset):
    if args.source == "reference":
        prs = scenarios.REFERENCE_RECEIVED_POWER
    else:
        dr = _rx(args, preset)
        prs = {p.name: float(scenarios.budget(preset.scenario(p.average_distance, dr)).received_power)
               for p in scenarios.PLANETS}
    rows = scenarios.planets_table(prs, args.pn, args.order, args.slot_ns * 1e-9, preset.wavelength)
    return scenarios.PLANETS_HEADER, rows


def cmd_oam(args, preset):
    waist = args.waist if args.waist is not None else args.tx_diameter / 2
    spec = oam.LgBeamSpec(args.l, args.p, waist, preset.wavelength)
    if args.raster:
        rows = oam.polar_raster(spec, args.distance, args.samples, args.n_phi, args.extent)
        return ("r_meters", "phi_rad", "intensity_normalized", "phase_rad"), rows
    prof = oam.profile(spec, args.distance, args.samples, args.extent)
    i = prof.intensities
    i = i / i.max() if i.max() > 0 else i
    return ("r_meters", "intensity_normalized"), list(zip(prof.radii.tolist(), i.tolist()))


def cmd_fom(args, preset):
    if args.distance_au is not None:
        au = args.distance_au
    elif args.distance is not None:
        au = args.distance / AU
    else:
        raise ValueError("give --distance-au or --distance")
    f = scenarios.figure_of_merit(au, args.rate, args.aperture, args.power)
    return ("distance_au", "rate_bps", "aperture_m", "power_w", "fom"), [
        (au, args.rate, args.aperture, args.power, f)]


def cmd_simulate(args, preset):
    if args.kind == "ser":
        rows = []
        for m in args.order:
            for ks in args.ks:
                cfg = montecarlo.SimConfig(args.trials, args.seed, ppm.PpmConfig(m, 1e-9),
                                           ppm.PoissonSlotModel(ks, args.kb))
                est = montecarlo.simulate_ser(cfg, workers=args.workers)
                rows.append((m, ks, args.kb, est.estimate, est.stderr,
                             ppm.symbol_error_probability(m, ks) if args.kb == 0 else "",
                             est.trials, est.seed))
        return ("M", "Ks", "Kb", "estimate", "stderr", "analytic", "trials", "seed"), rows
    horizon = args.horizon or 1e6 / args.flux
    rows = []
    for tau in args.dead_time:
        est = montecarlo.simulate_blocking(args.flux, tau, horizon, args.seed)
        rows.append((args.flux, tau, horizon, est.ratio, 1 / (1 + args.flux * tau),
                     est.arrived, est.seed))
    return ("flux", "dead_time", "horizon", "estimate", "analytic", "arrivals", "seed"), rows


COMMANDS = {
    "budget": cmd_budget, "capacity": cmd_capacity, "ser": cmd_ser, "design": cmd_design,
    "sweep": cmd_sweep, "planets": cmd_planets, "oam": cmd_oam, "fom": cmd_fom,
    "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        preset = scenarios.MissionPreset.from_config(args.config, dict(args.overrides))
        _echo(preset, args)
        result = COMMANDS[args.command](args, preset)
    except designer.InfeasibleDesign as exc:
        sys.stderr.write(f"infeasible: {exc}\n")
        return EXIT_INFEASIBLE
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    header, rows, *rest = result
    with _output(args.out) as fh:
        scenarios.write_csv(header, rows, fh)
    if rest and not rest[0]:
        sys.stderr.write("infeasible: no combination meets capacity after margin\n")
        return EXIT_INFEASIBLE
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
