"""Downlink rate versus stored power for the three receivers on one link."""

import argparse
import csv

from harvestlink.config import load_config
from harvestlink.downlink_region import ReceiverModel, downlink_boundary


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default="configs/link_50m.conf")
    ap.add_argument("--points", type=int, default=512)
    ap.add_argument("--out", default="capacity_energy.csv")
    args = ap.parse_args(argv)

    cfg = load_config(args.config)
    curves = {rx: downlink_boundary(rx, cfg.link, cfg.p0, args.points) for rx in ReceiverModel}
    xs = curves[ReceiverModel.OPTIMUM].xs
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["ps_watts"] + [f"rd_{rx.value}_bps" for rx in ReceiverModel])
        for i, ps in enumerate(xs):
            w.writerow([f"{ps:.6g}"] + [f"{curves[rx].ys[i]:.6g}" for rx in ReceiverModel])
    print(f"wrote {len(xs)} rows to {args.out}")


if __name__ == "__main__":
    main()
