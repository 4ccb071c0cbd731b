"""Command line interface: ``killedbrw <command> --dist law.json ...``.

Every command prints one JSON object on stdout. ``--dist`` takes a JSON file
of the form ``{"atoms": [{"value": -1, "prob": 0.5}, ...]}``, inline JSON, or
the name of a built-in law (see ``killedbrw.laws``).
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys

import numpy as np

from .critical import critical_params, v_star_infimum
from .errors import KilledBRWError
from .fixedpoint import GridConfig, RightMode, iterate_to_fixed_point
from .fronts import Kind, build_sub, build_super, check_sub_inequality, check_super_inequality, snap_eps
from .gwbounds import regime_report
from .laws import BATTERY
from .linwave import linear_wave
from .step_dist import load_distribution

log = logging.getLogger("killedbrw")


def _law(text):
    if text in BATTERY:
        return BATTERY[text]
    return load_distribution(text)


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _emit(payload):
    json.dump(payload, sys.stdout, indent=2, default=_json_default)
    sys.stdout.write("\n")


def cmd_critical(args):
    d = args.dist
    crit = critical_params(d)
    out = crit.to_json()
    out["v_star_infimum"] = v_star_infimum(d)
    _emit(out)


def cmd_linwave(args):
    crit = critical_params(args.dist)
    a = -math.log(2.0) if args.a is None else args.a
    wave = linear_wave(crit, args.dist, args.eps, a)
    _emit({"eps": wave.eps, "v": wave.v, "a_eps": wave.a_eps, **wave.to_json()})


def cmd_fronts(args):
    d = args.dist
    crit = critical_params(d)
    eps = snap_eps(crit, d, args.eps, args.step) if args.snap else args.eps
    if args.kind is Kind.SUPER:
        p = build_super(crit, d, eps, step=args.step)
        report = check_super_inequality(p, d)
    else:
        p = build_sub(crit, d, eps, step=args.step)
        report = check_sub_inequality(p, d)
    if args.dump:
        p.grid.to_csv(args.dump)
    _emit({**p.to_json(), "check": report.to_json()})


def cmd_survive(args):
    d = args.dist
    v = args.v
    if v is None:
        v = critical_params(d).v_star - args.eps
    grid = GridConfig(step=args.step, x_max=args.xmax, right_mode=args.right)
    res = iterate_to_fixed_point(d, v, grid, tol=args.tol, max_iters=args.max_iters)
    if args.dump:
        res.q.to_csv(args.dump, header="x,q_inf")
    _emit({**res.to_json(), "v": v, "q0_err": res.q0.err, "q1_err": res.q1.err, "lattice": res.lattice})


def cmd_mc(args):
    # imported lazily: numba compilation is only paid by this command
    from .mcsim import SimConfig, estimate_qn

    cfg = SimConfig(v=args.v, n=args.n, x0=args.x0, replicas=args.replicas, seed=args.seed,
                    node_budget=args.budget)
    est = estimate_qn(args.dist, cfg)
    _emit({"estimate": est.value, "ci95": [est.lower, est.upper], "budget_hits": est.meta["budget_hits"],
           "se": est.meta["se"]})


def cmd_bd_speed(args):
    from .bdsystem import measure_speed

    crit = critical_params(args.dist)
    v_hat, ci = measure_speed(args.dist, args.N, args.horizon, args.seed, burn_in=args.burn_in)
    shift = crit.v_star - v_hat
    _emit({"v_hat": v_hat, "ci": ci, "v_star": crit.v_star, "shift": shift,
           "shift_times_log2N": shift * math.log(args.N) ** 2})


def cmd_regime(args):
    _emit(regime_report(args.dist, args.v).to_json())


def build_parser():
    parser = argparse.ArgumentParser(prog="killedbrw", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--dist", type=_law, required=True, help="JSON file, inline JSON or built-in law name")
        p.set_defaults(func=func)
        return p

    command("critical", cmd_critical, "tilting parameter t*, critical speed v*, regime")

    p = command("linwave", cmd_linwave, "complex characteristic root at v = v* - eps")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--a", type=float, default=None, help="right-hand side a(eps); default -log 2")

    p = command("fronts", cmd_fronts, "build and check a super- or sub-solution")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--kind", type=Kind, choices=list(Kind), required=True)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--no-snap", dest="snap", action="store_false",
                   help="use eps as given instead of moving v onto the step lattice")
    p.add_argument("--dump", metavar="CSV", help="write x,value on the grid")

    p = command("survive", cmd_survive, "fixed point q_inf of the survival operator")
    speed = p.add_mutually_exclusive_group(required=True)
    speed.add_argument("--v", type=float)
    speed.add_argument("--eps", type=float, help="use v = v* - eps")
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--xmax", type=float, default=None)
    p.add_argument("--right", type=RightMode.parse, choices=list(RightMode), default=RightMode.CLAMP_ONE)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iters", type=int, default=500_000)
    p.add_argument("--dump", metavar="CSV", help="write x,q_inf on the grid")

    p = command("mc", cmd_mc, "Monte Carlo estimate of q_n(x0)")
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--replicas", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10_000_000, help="node budget per replica")

    p = command("bd-speed", cmd_bd_speed, "front speed of the N-particle branching-selection system")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--burn-in", type=int, default=None, help="default: 20%% of the horizon")
    p.add_argument("--seed", type=int, default=0)

    p = command("regime", cmd_regime, "regime and Galton-Watson bounds")
    p.add_argument("--v", type=float, default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        args.func(args)
    except KilledBRWError as exc:
        print(f"killedbrw {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
