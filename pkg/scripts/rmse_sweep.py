#!/usr/bin/env python3
"""RMSE sweeps over SNR and snapshot count for the 9-sensor design."""

import argparse
import sys

from coarraylab.cli import main as cli_main


def run(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="rmse")
    parser.add_argument("--seed", type=int, default=500)
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--jobs", type=int, default=4)
    parser.add_argument("--coupling", action="store_true")
    args = parser.parse_args(argv)

    base = [
        "rmse",
        "--n-sensors", "9",
        "--n-sources", "12",
        "--seed", str(args.seed),
        "--trials", str(args.trials),
        "--jobs", str(args.jobs),
    ]
    if args.coupling:
        base.append("--coupling")

    rc = cli_main(base + ["--snr-list=-7,-1,5,8", "--snapshots-list", "14000",
                          "--out-dir", args.out_dir + "/vs_snr"])
    rc |= cli_main(base + ["--snr-list", "5", "--snapshots-list", "10000,13000,16000",
                           "--out-dir", args.out_dir + "/vs_snapshots"])
    return rc


if __name__ == "__main__":
    sys.exit(run())
