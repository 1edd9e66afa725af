"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import dynamics, spectrum, verify, wavefunction
from .jacobi import PhysicalUnits
from .roots import f4_group

SPECTRUM_HEADER = ["n1", "n2", "n3", "n4", "k1", "k2", "k3", "k4", "E_int", "E_over_hbar2_m3L2"]


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.15g}"


@dataclass(frozen=True)
class RunConfig:
    units: PhysicalUnits
    m: float
    seed: int
    samples: int | None
    out: str | None


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _config(args, parser) -> RunConfig:
    try:
        units = PhysicalUnits(args.m3, args.L, args.hbar)
    except ValueError as e:
        parser.error(str(e))
    if args.m <= 0:
        parser.error("--m must be positive")
    return RunConfig(units, args.m, args.seed, getattr(args, "samples", None), getattr(args, "out", None))


def _energy_cap(args, parser) -> int:
    units = _config(args, parser).units
    if args.emax_int is not None:
        if args.emax_int < 0:
            parser.error("--emax-int must be nonnegative")
        return args.emax_int
    if args.emax is None:
        parser.error("give --emax-int or --emax")
    if not args.emax >= 0:
        parser.error("--emax must be nonnegative")
    if args.units_energy == "hbar2-m3L2":
        return spectrum.e_int_cap(args.emax * units.natural_energy, units)
    return spectrum.e_int_cap(args.emax, units)


def cmd_spectrum(args, parser) -> int:
    cap = _energy_cap(args, parser)
    table = spectrum.enumerate_table(cap)
    with _open_out(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SPECTRUM_HEADER)
        q = math.pi**2 / 6
        for qn, k, e in zip(table.qn.tolist(), table.k.tolist(), table.E_int.tolist()):
            w.writerow([*qn, *k, e, fmt(e * q)])
    return 0


def cmd_weyl(args, parser) -> int:
    cap = _energy_cap(args, parser)
    if args.points < 2:
        parser.error("--points must be at least 2")
    rows = spectrum.staircase(cap, args.points, _config(args, parser).units)
    with _open_out(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["E", "N_exact", "N_weyl"])
        for E, n, nw in rows:
            w.writerow([fmt(E), n, fmt(nw)])
    return 0


def cmd_density(args, parser) -> int:
    try:
        state = wavefunction.make_state(tuple(args.qn))
    except spectrum.InadmissibleError as e:
        parser.error(str(e))
    if args.element is not None and not 0 <= args.element < len(state.group):
        parser.error("--element must index a group element (0..1151)")
    try:
        sec = wavefunction.density_section(
            state,
            (args.plane[:4], args.plane[4]),
            (args.sphere[:4], args.sphere[4]),
            args.resolution,
            view=args.view,
            element=args.element,
        )
    except ValueError as e:
        parser.error(str(e))
    with _open_out(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["lon", "lat", "density"])
        for lon, lat, d in sec.rows():
            w.writerow([fmt(lon), fmt(lat), fmt(d)])
    return 0


def cmd_verify(args, parser) -> int:
    report = verify.run_suite(args.suite, seed=args.seed, samples=args.samples)
    with _open_out(args.out) as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0 if all(c["pass"] for c in report["checks"]) else 1


def cmd_mc(args, parser) -> int:
    cfg = _config(args, parser)
    units = cfg.units
    try:
        a = wavefunction.make_state(tuple(args.qn))
        b = wavefunction.make_state(tuple(args.qn_b)) if args.qn_b else None
    except spectrum.InadmissibleError as e:
        parser.error(str(e))
    if args.samples < 1000:
        parser.error("--samples must be at least 1000")
    if b is None:
        est = wavefunction.mc_normalization(a, cfg.samples, cfg.seed, units)
    else:
        est = wavefunction.mc_overlap(a, b, cfg.samples, cfg.seed, units)
    with _open_out(cfg.out) as fh:
        json.dump(verify._num(est.to_json()), fh, sort_keys=True)
        fh.write("\n")
    return 0


def cmd_group(args, parser) -> int:
    with _open_out(args.out) as fh:
        json.dump(f4_group().to_json(), fh)
        fh.write("\n")
    return 0


def cmd_trace(args, parser) -> int:
    if args.events < 1:
        parser.error("--events must be at least 1")
    cfg = _config(args, parser)
    st = dynamics.random_state(cfg.seed, L=cfg.units.L)
    summ = dynamics.run(st, args.events, record_trace=True)
    with _open_out(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(dynamics.TRACE_HEADER)
        for row in summ.trace:
            w.writerow([fmt(row[0]), row[1], *(fmt(v) for v in row[2:])])
    return 0


def _add_units(p):
    p.add_argument("--m3", type=float, default=1.0, help="mass of the lightest particle")
    p.add_argument("--L", type=float, default=1.0, help="box length")
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--m", type=float, default=1.0, help="overall mass scale")


def _add_energy(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--emax-int", type=int, help="cap in units pi^2 hbar^2 / (6 m3 L^2)")
    g.add_argument("--emax", type=float, help="cap as a physical energy")
    p.add_argument(
        "--units-energy", choices=["hbar2-m3L2", "physical"], default="hbar2-m3L2",
        help="how --emax is read: multiples of hbar^2/(m3 L^2), or absolute using the unit flags",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="octacube", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="enumerate levels as CSV")
    _add_energy(p)
    _add_units(p)
    p.add_argument("--format", choices=["csv"], default="csv")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_spectrum, subparser=p)

    p = sub.add_parser("weyl", help="exact staircase next to Weyl's law")
    _add_energy(p)
    _add_units(p)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_weyl, subparser=p)

    p = sub.add_parser("density", help="|psi|^2 on a 2-sphere section, CSV")
    _add_units(p)
    p.add_argument("--qn", type=int, nargs=4, default=list(spectrum.GROUND_QN), metavar="N")
    p.add_argument("--plane", type=float, nargs=5, required=True, metavar=("N1", "N2", "N3", "N4", "C"),
                   help="hyperplane N . z = C")
    p.add_argument("--sphere", type=float, nargs=5, required=True, metavar=("Z1", "Z2", "Z3", "Z4", "R"),
                   help="3-sphere center and radius")
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--view", type=float, nargs=3, default=[0.0, 0.0, 1.0],
                   help="viewing direction inside the plane's frame")
    p.add_argument("--element", type=int, help="map the slice through this group element")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_density, subparser=p)

    p = sub.add_parser("verify", help="run a property suite, JSON report")
    p.add_argument("suite", choices=[*verify.SUITES, "all"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, help="Monte Carlo budget for sampling suites")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_verify, subparser=p)

    p = sub.add_parser("mc", help="Monte Carlo normalization or overlap, JSON")
    _add_units(p)
    p.add_argument("--qn", type=int, nargs=4, default=list(spectrum.GROUND_QN), metavar="N")
    p.add_argument("--qn-b", type=int, nargs=4, metavar="N", help="second state for an overlap")
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_mc, subparser=p)

    p = sub.add_parser("group", help="dump F4 (doubled matrices, parity, word length) as JSON")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_group, subparser=p)

    p = sub.add_parser("trace", help="classical event-driven trajectory, CSV")
    _add_units(p)
    p.add_argument("--events", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_trace, subparser=p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, args.subparser)


if __name__ == "__main__":
    sys.exit(main())
