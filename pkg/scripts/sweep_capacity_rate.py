"""Downlink/uplink rate boundaries for every receiver and time-split strategy."""

import argparse
import csv
import time

from harvestlink.config import load_config
from harvestlink.downlink_region import ReceiverModel
from harvestlink.joint_region import Strategy, joint_boundary


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default="configs/link_50m.conf")
    ap.add_argument("--points", type=int, default=128)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="capacity_rate.csv")
    args = ap.parse_args(argv)

    cfg = load_config(args.config)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["receiver", "strategy", "rd_bps", "ru_bps", "lambda", "rho"])
        for rx in ReceiverModel:
            for strategy in Strategy:
                t0 = time.perf_counter()
                curve = joint_boundary(rx, cfg.link, cfg.p0, args.points, strategy, seed=args.seed)
                for s in curve.samples:
                    w.writerow([rx.value, strategy.value] + [f"{v:.6g}" for v in
                               (s.x, s.y, s.controls["lambda"], s.controls["rho"])])
                print(f"{rx.value:>10} {strategy.value:>7}: {time.perf_counter() - t0:.2f} s")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
