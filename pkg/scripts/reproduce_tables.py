#!/usr/bin/env python3
"""Regenerate the design, DOF-comparison and coupling-leakage tables.

Runs the CLI at the reference sensor counts and drops the CSVs into an
output directory (default ./tables).
"""

import argparse
import sys

from coarraylab.cli import main as cli_main


def run(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="tables")
    args = parser.parse_args(argv)

    rc = 0
    for n in (9, 11, 19):
        rc |= cli_main(["design", str(n), "--out-dir", args.out_dir])
    rc |= cli_main(["dof-table", "9", "11", "19", "--out-dir", args.out_dir])
    rc |= cli_main(["coupling-table", "9", "10", "11", "19", "21", "23",
                    "--out-dir", args.out_dir])
    return rc


if __name__ == "__main__":
    sys.exit(run())
