#!/usr/bin/env python3
"""Close-source resolution trials: 7-sensor design, sources 1.6 degrees apart."""

import argparse
import sys

from coarraylab.cli import main as cli_main


def run(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="resolution")
    parser.add_argument("--seed", type=int, default=1000)
    parser.add_argument("--trials", type=int, default=20)
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args(argv)

    return cli_main([
        "resolve",
        "--n-sensors", "7",
        "--angles=-0.8,0.8",
        "--snr", "0",
        "--snapshots", "10000",
        "--tol-deg", "0.4",
        "--seed", str(args.seed),
        "--trials", str(args.trials),
        "--jobs", str(args.jobs),
        "--out-dir", args.out_dir,
    ])


if __name__ == "__main__":
    sys.exit(run())
