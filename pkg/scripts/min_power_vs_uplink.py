"""Minimum master power as the uplink rate grows, at a fixed downlink rate.

Also prints the savings table for one target pair.
"""

import argparse
import csv

import numpy as np

from harvestlink.config import load_config
from harvestlink.downlink_region import ReceiverModel
from harvestlink.green_planner import min_power, savings_report
from harvestlink.joint_region import RatePair, Strategy


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default="configs/link_2m.conf")
    ap.add_argument("--rd", type=float, default=2000.0)
    ap.add_argument("--ru-max", type=float, default=4000.0)
    ap.add_argument("--points", type=int, default=41)
    ap.add_argument("--target-ru", type=float, default=3000.0)
    ap.add_argument("--out", default="min_power.csv")
    args = ap.parse_args(argv)

    link = load_config(args.config).link
    combos = [(rx, st) for rx in ReceiverModel for st in Strategy]
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["ru_bps"] + [f"p0_{rx.value}_{st.value}_watts" for rx, st in combos])
        for ru in np.linspace(0.0, args.ru_max, args.points):
            target = RatePair(args.rd, float(ru))
            w.writerow([f"{ru:.6g}"] + [f"{min_power(rx, st, link, target).p0_min:.6g}" for rx, st in combos])
    print(f"wrote {args.out}")

    print(f"\nsavings at rd={args.rd:g}, ru={args.target_ru:g} (baseline: orthogonal, halving)")
    for row in savings_report(link, RatePair(args.rd, args.target_ru)):
        print(f"  {row.receiver.value:>10} {row.strategy.value:>7}  {row.p0_min:.4f} W  {row.saving:6.1%}")


if __name__ == "__main__":
    main()
