"""Achieved uplink rate of save-and-transmit against the horizon length."""

import argparse

from harvestlink.config import load_config
from harvestlink.uplink_throughput import ArrivalProcess, simulate_save_and_transmit, uplink_capacity


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default="configs/link_50m.conf")
    ap.add_argument("--arrival", default="exp:0.04")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--save-fraction", type=float, default=0.01)
    ap.add_argument("--max-exp", type=int, default=6, help="largest horizon is 10**max_exp slots")
    args = ap.parse_args(argv)

    link = load_config(args.config).link
    arrivals = ArrivalProcess.parse(args.arrival, seed=args.seed)
    limit = uplink_capacity(link, arrivals.mean)
    print(f"closed-form limit {limit:.3f} bit/s")
    print(f"{'slots':>9} {'rate':>9} {'ratio':>7} {'outages':>8} {'min battery':>12}")
    for k in range(3, args.max_exp + 1):
        tr = simulate_save_and_transmit(link, arrivals, 10**k, args.save_fraction)
        print(f"{10**k:>9} {tr.achieved_rate:9.3f} {tr.achieved_rate / limit:7.4f} "
              f"{tr.outage_slots:>8} {tr.min_battery:12.4g}")


if __name__ == "__main__":
    main()
