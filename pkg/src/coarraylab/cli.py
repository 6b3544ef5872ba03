"""Command-line front end wiring the library into reproducible experiments.

Subcommands: design, coarray, dof-table, coupling-table, resolve, rmse.
Tabular outputs are UTF-8 CSV with a header row; per-trial logs are JSON
Lines.  Every stochastic command takes a mandatory --seed and echoes it,
and re-running a command with the same configuration reproduces its
output files byte for byte.

A flat key-value config file (``key = value`` lines, '#' comments) can
seed any subcommand's options via --config; explicit flags override it.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import coarray as ca
from . import coupling as cp
from . import estimator as est
from . import geometry as geo
from . import signalsim as sim
from .optimizer import optimize

OUT_DIR_ENV = "COARRAYLAB_OUT"


def _out_dir(args) -> str:
    path = args.out_dir or os.environ.get(OUT_DIR_ENV) or "."
    os.makedirs(path, exist_ok=True)
    return path


def _parse_floats(text: str) -> List[float]:
    return [float(x) for x in text.split(",") if x.strip() != ""]


def _parse_ints(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x.strip() != ""]


def _write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


# ---------------------------------------------------------------- design

def cmd_design(args) -> int:
    result = optimize(args.n)
    p = result.best_params
    array = geo.build_fogna(p)
    print(f"N={args.n} best split (N1,N2,N3)=({p.n1},{p.n2},{p.n3}) "
          f"M=({p.m1},{p.m2}) E1={p.e1} E2={p.e2}")
    print(f"DOF={result.dof_star}")
    print(f"positions={list(array.positions)}")
    print(f"aperture={array.aperture}")
    path = os.path.join(_out_dir(args), f"design_trace_N{args.n}.csv")
    _write_csv(
        path,
        ["N1", "N2", "N3", "M1", "M2", "E1", "E2", "DOF"],
        [[r.n1, r.n2, r.n3, r.m1, r.m2, r.e1, r.e2, r.dof] for r in result.trace],
    )
    print(f"trace written to {path}")
    return 0


# --------------------------------------------------------------- coarray

def _array_from_args(args) -> geo.SensorArray:
    picks = [args.positions, args.fogna, args.split, args.cna, args.nested]
    if sum(x is not None for x in picks) != 1:
        raise ValueError("choose exactly one of --positions/--fogna/--split/--cna/--nested")
    if args.positions is not None:
        return geo.SensorArray(tuple(_parse_ints(args.positions)))
    if args.fogna is not None:
        return geo.build_fogna(optimize(args.fogna).best_params)
    if args.split is not None:
        n1, n2, n3 = _parse_ints(args.split)
        return geo.build_fogna((n1, n2, n3))
    if args.cna is not None:
        m1, m2 = _parse_ints(args.cna)
        return geo.build_cna(m1, m2)
    n1, n2 = _parse_ints(args.nested)
    return geo.build_nested(n1, n2)


_COARRAY_BUILDERS = {
    "sca": ca.sum_coarray,
    "dca": ca.diff_coarray,
    "foca1": lambda s: ca.foca(s, 1),
    "foca2": lambda s: ca.foca(s, 2),
    "foca3": lambda s: ca.foca(s, 3),
    "foeca": ca.foeca,
}


def cmd_coarray(args) -> int:
    array = _array_from_args(args)
    report: Dict[str, object] = {"positions": list(array.positions)}
    for which in args.which:
        multiset = _COARRAY_BUILDERS[which](array)
        segment = ca.analyze_segment(multiset)
        entry: Dict[str, object] = {
            "total": multiset.total,
            "segment": json.loads(segment.to_json()),
        }
        if args.entries:
            entry["entries"] = {str(l): m for l, m in sorted(multiset.entries.items())}
        report[which] = entry
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0


# -------------------------------------------------------------- dof-table

def cmd_dof_table(args) -> int:
    rows = []
    for n in args.n:
        result = optimize(n)
        p = result.best_params
        published = geo.REFERENCE_DOF_ROWS.get(n, {})
        pub_fogna = published.get("FOGNA", (None, ""))[1]
        rows.append([n, "FOGNA", f"({p.n1},{p.n2},{p.n3})", result.dof_star, pub_fogna])
        for family in ("FL_NA", "SE_FL_NA", "FO_FRACTAL_NA", "SD_FODC_NA"):
            if family not in published:
                continue
            split, pub = published[family]
            try:
                formula = geo.competitor_dof(family, split)
            except ValueError:
                formula = ""
            rows.append([n, family, "(" + ",".join(map(str, split)) + ")", formula, pub])
    path = os.path.join(_out_dir(args), "dof_table.csv")
    _write_csv(path, ["n_sensors", "family", "split", "dof_formula", "dof_published"], rows)
    for row in rows:
        print(",".join(str(x) for x in row))
    print(f"table written to {path}")
    return 0


# ---------------------------------------------------------- coupling-table

def cmd_coupling_table(args) -> int:
    model = cp.CouplingModel()
    rows = []
    for n in args.n:
        opt = optimize(n).best_params
        opt_split = (opt.n1, opt.n2, opt.n3)
        leak_opt = cp.coupling_leakage(cp.coupling_matrix(geo.build_fogna(opt), model))
        tab_split, published = cp.REFERENCE_LEAKAGE.get(n, (None, ""))
        if tab_split is not None and tuple(tab_split) != opt_split:
            leak_tab = cp.coupling_leakage(cp.coupling_matrix(geo.build_fogna(tab_split), model))
            tab_cell, leak_tab_cell = "(" + ",".join(map(str, tab_split)) + ")", f"{leak_tab:.6f}"
        else:
            tab_cell, leak_tab_cell = "", ""
        rows.append([
            n,
            f"({opt.n1},{opt.n2},{opt.n3})",
            f"{leak_opt:.6f}",
            tab_cell,
            leak_tab_cell,
            published,
        ])
    path = os.path.join(_out_dir(args), "coupling_table.csv")
    _write_csv(
        path,
        ["n_sensors", "split_optimizer", "leakage_optimizer", "split_tabulated",
         "leakage_tabulated", "leakage_published"],
        rows,
    )
    for row in rows:
        print(",".join(str(x) for x in row))
    print(f"table written to {path}")
    return 0


# ------------------------------------------------------------ experiments

def _fogna_for_sensors(n_sensors: int) -> geo.SensorArray:
    return geo.build_fogna(optimize(n_sensors).best_params)


def _run_doa_trial(task: Tuple) -> Dict:
    """One Monte-Carlo trial, evaluated at every sweep point.

    All sweep points of a trial share the same source/noise draws (taken
    at the largest snapshot count, noise at unit variance and scaled per
    SNR), so sweeps are compared on common random numbers.
    """
    (positions, truths, snr_list, k_list, seed, trial, lc, grid_step, sub_len,
     min_sep, coupled) = task
    array = geo.SensorArray(tuple(positions))
    rng = np.random.default_rng([seed, trial])
    d = len(truths)
    k_max = max(k_list)
    a = sim.manifold(array, truths)
    if coupled:
        a = cp.coupling_matrix(array) @ a
    sources = rng.choice([-1.0, 1.0], size=(d, k_max))
    unit_noise = sim.complex_gaussian_sampler(rng, (array.n_sensors, k_max))
    out = []
    for snr_db in snr_list:
        sigma = math.sqrt(10.0 ** (-snr_db / 10.0))
        for k in k_list:
            x = a @ sources[:, :k] + sigma * unit_noise[:, :k]
            bank = est.sample_cumulants(x)
            meas = est.assemble_foeca(bank, array, lc=lc)
            estimate = est.ss_music(meas, d, grid_step_deg=grid_step,
                                    subarray_len=sub_len, min_peak_sep_deg=min_sep)
            errors = est.match_nearest(estimate.angles_deg, truths)
            out.append({
                "snr_db": snr_db,
                "n_snapshots": k,
                "trial": trial,
                "seed": seed,
                "truths": list(truths),
                "estimates": [round(float(v), 6) for v in estimate.angles_deg],
                "errors": [round(float(v), 6) for v in errors],
                "rmse": round(float(np.sqrt(np.mean(errors ** 2))), 6),
            })
    return {"trial": trial, "records": out}


def _run_trials(args, positions, truths, snr_list, k_list) -> List[Dict]:
    array = geo.SensorArray(tuple(positions))
    lc = ca.analyze_segment(ca.foeca(array)).lc
    tasks = [
        (tuple(positions), tuple(truths), tuple(snr_list), tuple(k_list), args.seed,
         trial, lc, args.grid_step, args.subarray_len, args.min_peak_sep, args.coupling)
        for trial in range(args.trials)
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_doa_trial, tasks))
    else:
        results = [_run_doa_trial(t) for t in tasks]
    records = []
    for res in sorted(results, key=lambda r: r["trial"]):
        records.extend(res["records"])
    return records


def cmd_resolve(args) -> int:
    truths = sorted(_parse_floats(args.angles))
    array = _fogna_for_sensors(args.n_sensors)
    print(f"array positions: {list(array.positions)}")
    print(f"seed: {args.seed}")
    records = _run_trials(args, array.positions, truths, [args.snr], [args.snapshots])
    out_dir = _out_dir(args)
    jsonl = os.path.join(out_dir, "resolve_trials.jsonl")
    with open(jsonl, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    rows = []
    n_ok = 0
    for rec in records:
        hit = max(abs(e) for e in rec["errors"]) <= args.tol_deg
        n_ok += hit
        rows.append([rec["trial"], rec["seed"],
                     ";".join(f"{v:.4f}" for v in rec["estimates"]),
                     f"{rec['rmse']:.6f}", int(hit)])
    path = os.path.join(out_dir, "resolve_summary.csv")
    _write_csv(path, ["trial", "seed", "estimates_deg", "rmse_deg", "within_tol"], rows)
    print(f"{n_ok}/{len(records)} trials within {args.tol_deg} deg; summary in {path}")
    return 0


def cmd_rmse(args) -> int:
    snr_list = _parse_floats(args.snr_list)
    k_list = _parse_ints(args.snapshots_list)
    if args.angles:
        truths = sorted(_parse_floats(args.angles))
    else:
        truths = list(np.linspace(-60.0, 60.0, args.n_sources))
    array = _fogna_for_sensors(args.n_sensors)
    print(f"array positions: {list(array.positions)}")
    print(f"seed: {args.seed}")
    records = _run_trials(args, array.positions, truths, snr_list, k_list)
    out_dir = _out_dir(args)
    jsonl = os.path.join(out_dir, "rmse_trials.jsonl")
    with open(jsonl, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    rows = []
    for snr_db in snr_list:
        for k in k_list:
            vals = [r["rmse"] for r in records
                    if r["snr_db"] == snr_db and r["n_snapshots"] == k]
            rows.append([snr_db, k, len(vals),
                         f"{float(np.median(vals)):.6f}", f"{float(np.mean(vals)):.6f}"])
    path = os.path.join(out_dir, "rmse_results.csv")
    _write_csv(path, ["snr_db", "n_snapshots", "n_trials", "median_rmse_deg", "mean_rmse_deg"], rows)
    for row in rows:
        print(",".join(str(x) for x in row))
    print(f"results written to {path}")
    return 0


# ------------------------------------------------------------------ main

def _load_config(path: str) -> List[str]:
    flags: List[str] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            flag = "--" + key.replace("_", "-")
            if value.lower() in ("true", "false"):
                if value.lower() == "true":
                    flags.append(flag)
            else:
                # single-token form so values may start with a minus sign
                flags.append(f"{flag}={value}")
    return flags


def _expand_config(argv: List[str]) -> List[str]:
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise ValueError("--config needs a file path")
    flags = _load_config(argv[i + 1])
    rest = argv[:i] + argv[i + 2:]
    # config flags go right after the subcommand so explicit flags win
    return rest[:1] + flags + rest[1:]


def _add_common_experiment_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, required=True, help="base RNG seed (mandatory)")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1, help="parallel trial workers")
    p.add_argument("--grid-step", type=float, default=0.05, help="spectrum grid step, degrees")
    p.add_argument("--subarray-len", type=int, default=None,
                   help="smoothing subarray length (default: maximal, Lc+1)")
    p.add_argument("--min-peak-sep", type=float, default=0.5,
                   help="minimum separation between picked peaks, degrees")
    p.add_argument("--coupling", action="store_true",
                   help="apply the default mutual-coupling model")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--config", help=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coarraylab",
                                     description="sparse-array design and co-array DOA lab")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("design", help="optimize the three-subarray split for N sensors")
    p.add_argument("n", type=int)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--config", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_design)

    p = subs.add_parser("coarray", help="co-array multiset and segment report")
    p.add_argument("--positions", help="comma-separated integer positions")
    p.add_argument("--fogna", type=int, help="optimized design with this many sensors")
    p.add_argument("--split", help="explicit N1,N2,N3 split")
    p.add_argument("--cna", help="CNA blocks M1,M2")
    p.add_argument("--nested", help="two-level nested N1,N2")
    p.add_argument("--which", nargs="+", default=["foeca"],
                   choices=sorted(_COARRAY_BUILDERS))
    p.add_argument("--entries", action="store_true", help="include the lag->multiplicity map")
    p.add_argument("--out", help="also write the JSON report here")
    p.add_argument("--config", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_coarray)

    p = subs.add_parser("dof-table", help="DOF comparison rows (formula vs published)")
    p.add_argument("n", type=int, nargs="+")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--config", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_dof_table)

    p = subs.add_parser("coupling-table", help="coupling-leakage rows (computed vs published)")
    p.add_argument("n", type=int, nargs="+")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--config", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_coupling_table)

    p = subs.add_parser("resolve", help="two-source (or more) resolution trials")
    p.add_argument("--n-sensors", type=int, required=True)
    p.add_argument("--angles", required=True, help="comma-separated truth angles, degrees")
    p.add_argument("--snr", type=float, default=0.0)
    p.add_argument("--snapshots", type=int, default=10000)
    p.add_argument("--tol-deg", type=float, default=0.4)
    _add_common_experiment_args(p)
    p.set_defaults(func=cmd_resolve)

    p = subs.add_parser("rmse", help="RMSE sweep over SNR and snapshot counts")
    p.add_argument("--n-sensors", type=int, required=True)
    p.add_argument("--n-sources", type=int, default=12)
    p.add_argument("--angles", help="explicit truths (default: uniform in [-60, 60])")
    p.add_argument("--snr-list", default="-7,-1,5,8")
    p.add_argument("--snapshots-list", default="14000")
    _add_common_experiment_args(p)
    p.set_defaults(func=cmd_rmse)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _expand_config(argv)
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
