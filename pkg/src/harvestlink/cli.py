"""Command-line entry point: ``region``, ``plan`` and ``simulate``.

Exit status is 0 on success, 2 for invalid input and 1 when the
requested point lies outside the achievable region.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .downlink_region import ReceiverModel, downlink_boundary, ps_max
from .errors import (ConfigError, HarvestLinkError, InfeasibleStorage, RateInfeasible,
                     TargetInfeasible)
from .green_planner import min_power
from .joint_region import RatePair, Strategy, joint_boundary, rd_max, region3d
from .config import load_config
from .uplink_throughput import ArrivalProcess, simulate_save_and_transmit, uplink_capacity

EXIT_INFEASIBLE = 1
EXIT_INVALID = 2


class UsageError(HarvestLinkError):
    pass


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _write_csv(path: str, header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def cmd_region(args) -> int:
    if args.points < 2:
        raise UsageError("points must be >= 2")
    cfg = load_config(args.config)
    rx = ReceiverModel(args.receiver)
    strategy = Strategy(args.strategy)
    if args.mode == "energy":
        curve = downlink_boundary(rx, cfg.link, cfg.p0, args.points)
        curve.validate()
        rows = [(s.x, s.y) for s in curve.samples]
        header = ("ps_watts", "rd_bps")
    elif args.mode == "rate":
        curve = joint_boundary(rx, cfg.link, cfg.p0, args.points, strategy, seed=args.seed)
        curve.validate()
        rows = [(s.x, s.y, s.controls["lambda"], s.controls["rho"]) for s in curve.samples]
        header = ("rd_bps", "ru_bps", "lambda", "rho")
    else:
        n = args.points
        pr_top = ps_max(cfg.link, cfg.p0)
        rd_top = rd_max(rx, cfg.link, cfg.p0)
        pr_grid = [pr_top * i / (n - 1) for i in range(n)]
        rd_grid = [rd_top * i / (n - 1) for i in range(n)]
        pts = region3d(rx, cfg.link, cfg.p0, pr_grid, rd_grid, strategy)
        rows = sorted((s.rd, s.pr, s.ru) for s in pts)
        header = ("rd_bps", "pr_watts", "ru_bps")
    _write_csv(args.out, header, rows)
    return 0


def cmd_plan(args) -> int:
    if args.rd < 0 or args.ru < 0:
        raise UsageError("rates must be nonnegative")
    cfg = load_config(args.config)
    res = min_power(ReceiverModel(args.receiver), Strategy(args.strategy), cfg.link,
                    RatePair(args.rd, args.ru))
    out = {
        "p0_min_watts": res.p0_min,
        "lambda": res.controls.lam,
        "rho": res.controls.rho,
        "receiver": res.receiver.value,
        "strategy": res.strategy.value,
    }
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_simulate(args) -> int:
    if args.slots < 1:
        raise UsageError("slots must be >= 1")
    cfg = load_config(args.config)
    arrivals = ArrivalProcess.parse(args.arrival, seed=args.seed)
    trace = simulate_save_and_transmit(cfg.link, arrivals, args.slots, args.save_fraction)
    out = {
        "achieved_rate_bps": trace.achieved_rate,
        "closed_form_rate_bps": uplink_capacity(cfg.link, arrivals.mean, include_pp=True),
        "outage_slots": trace.outage_slots,
        "min_battery_joules": trace.min_battery,
    }
    print(json.dumps(out, sort_keys=True))
    return 0


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harvestlink",
                                     description="Capacity regions and power planning for RF-powered links")
    sub = parser.add_subparsers(dest="command", required=True)

    receivers = [r.value for r in ReceiverModel]
    strategies = [s.value for s in Strategy]

    r = sub.add_parser("region", help="emit boundary samples of an achievable region as CSV")
    r.add_argument("--receiver", choices=receivers, required=True)
    r.add_argument("--mode", choices=("energy", "rate", "3d"), required=True)
    r.add_argument("--strategy", choices=strategies, default="optimal")
    r.add_argument("--points", type=int, default=64)
    r.add_argument("--config", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--seed", type=_u64, default=0)
    r.set_defaults(func=cmd_region)

    p = sub.add_parser("plan", help="minimum master power for a rate pair, as JSON")
    p.add_argument("--receiver", choices=receivers, required=True)
    p.add_argument("--strategy", choices=strategies, default="optimal")
    p.add_argument("--rd", type=float, required=True)
    p.add_argument("--ru", type=float, required=True)
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_plan)

    s = sub.add_parser("simulate", help="run the save-and-transmit simulator, JSON summary")
    s.add_argument("--slots", type=int, default=100000)
    s.add_argument("--seed", type=_u64, default=0)
    s.add_argument("--arrival", required=True, help="KIND:MEAN[:SHAPE], e.g. exp:0.04")
    s.add_argument("--save-fraction", type=float, default=0.01)
    s.add_argument("--config", required=True)
    s.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RateInfeasible, TargetInfeasible, InfeasibleStorage) as exc:
        print(f"harvestlink: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConfigError, HarvestLinkError, ValueError) as exc:
        print(f"harvestlink: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
