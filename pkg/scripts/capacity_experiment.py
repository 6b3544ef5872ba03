#!/usr/bin/env python3
"""Source-capacity run: 9-sensor design against 40 uniformly spread sources."""

import argparse
import sys

from coarraylab.cli import main as cli_main


def run(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="capacity")
    parser.add_argument("--seed", type=int, default=2)
    args = parser.parse_args(argv)

    return cli_main([
        "rmse",
        "--n-sensors", "9",
        "--n-sources", "40",
        "--snr-list", "0",
        "--snapshots-list", "10000",
        "--trials", "1",
        "--seed", str(args.seed),
        "--min-peak-sep", "1.0",
        "--out-dir", args.out_dir,
    ])


if __name__ == "__main__":
    sys.exit(run())
