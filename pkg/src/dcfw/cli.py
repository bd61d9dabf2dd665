"""Command line front end for the benchmark harness.

Subcommands: ``run`` executes a suite, ``profile`` turns saved results into
performance-profile curves, ``table`` prints shifted-geomean summaries.  A
key=value config file can supply any ``run`` option; explicit flags win.
"""

import argparse
import sys
from pathlib import Path

from . import bench

_BOOSTED_FORM = {"DCA-BPCG-WS-ES": "DCA-BPCG-WS-ES-BT", "DCA-BPCG-WS-ES-BT": "DCA-BPCG-WS-ES-BT"}

DEFAULTS = dict(
    suite="quadratics",
    sizes="10,20,30",
    seeds="0,1,2,3,4",
    variants=",".join(v for v in bench.VARIANTS if not v.endswith("-BT")),
    out="bench_out",
    tol=1e-6,
)


def _read_config_file(path):
    opts = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {raw!r} is not key=value")
        key, value = line.split("=", 1)
        opts[key.strip().replace("-", "_")] = value.strip()
    return opts


def _effective(args, key, cast=str):
    cli_value = getattr(args, key, None)
    if cli_value is not None:
        return cli_value
    if args.config:
        file_opts = _read_config_file(args.config)
        if key in file_opts:
            return cast(file_opts[key])
    return cast(DEFAULTS[key]) if key in DEFAULTS else None


def _int_list(text):
    return [int(tok) for tok in str(text).split(",") if tok.strip()]


def _as_bool(text):
    return str(text).strip().lower() in ("1", "true", "yes", "on")


def cmd_run(args):
    suite = _effective(args, "suite")
    sizes = _int_list(_effective(args, "sizes"))
    seeds = _int_list(_effective(args, "seeds"))
    variants = [v for v in str(_effective(args, "variants")).split(",") if v]
    out = _effective(args, "out")
    tol = float(_effective(args, "tol"))
    boosted = args.boosted or (
        args.config and _as_bool(_read_config_file(args.config).get("boosted", ""))
    )
    if boosted:
        missing = [v for v in variants if v not in _BOOSTED_FORM]
        if missing:
            raise ValueError(f"no boosted form of {missing}")
        variants = [_BOOSTED_FORM[v] for v in variants]
    results = bench.run_suite(
        suite,
        sizes,
        seeds,
        variants,
        qaplib_dir=_effective(args, "qaplib_dir"),
        out_dir=out,
        dca_gap_tol=tol,
        outer_cap=_effective(args, "outer_cap", int),
        inner_cap=_effective(args, "inner_cap", int),
        time_limit=_effective(args, "time_limit", float),
        log=print,
    )
    solved = sum(r.solved for r in results)
    print(f"{len(results)} runs, {solved} solved, results under {out}")
    return 0


def cmd_profile(args):
    results = bench.load_results(args.in_dir)
    thetas, curves = bench.performance_profile(
        results, args.metric, modified=args.modified
    )
    suffix = "_modified" if args.modified else ""
    path = Path(args.in_dir) / f"profile_{args.metric}{suffix}.csv"
    bench.write_profile(path, thetas, curves)
    for s, rho in curves.items():
        print(f"{s:<18} rho(1)={rho[0]:.3f} rho(max)={rho[-1]:.3f}")
    print(f"wrote {path}")
    return 0


def cmd_table(args):
    results = bench.load_results(args.in_dir)
    rows = bench.summarize_table(results)
    print(bench.format_table(rows))
    path = Path(args.in_dir) / "summary.csv"
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {path}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bench", description="difference-of-convex Frank-Wolfe benchmarks"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a suite of instances")
    run.add_argument("--suite", choices=["quadratics", "hard", "qap"])
    run.add_argument("--sizes", help="comma separated instance sizes")
    run.add_argument("--seeds", help="comma separated seeds")
    run.add_argument("--variants", help="comma separated variant names")
    run.add_argument("--qaplib-dir", dest="qaplib_dir", help="directory of .dat files")
    run.add_argument("--out", help="output directory")
    run.add_argument("--outer-cap", dest="outer_cap", type=int)
    run.add_argument("--inner-cap", dest="inner_cap", type=int)
    run.add_argument("--tol", type=float, help="stationarity gap tolerance")
    run.add_argument("--time-limit", dest="time_limit", type=float)
    run.add_argument(
        "--boosted", action="store_true", help="use the boosted form of each variant"
    )
    run.add_argument("--config", help="key=value file of run options")
    run.set_defaults(fn=cmd_run)

    profile = sub.add_parser("profile", help="performance profile from saved results")
    profile.add_argument("--in", dest="in_dir", required=True)
    profile.add_argument("--metric", choices=list(bench.METRICS), required=True)
    profile.add_argument(
        "--modified",
        action="store_true",
        help="count unsolved runs as solved at their final iteration",
    )
    profile.set_defaults(fn=cmd_profile)

    table = sub.add_parser("table", help="shifted-geomean summary table")
    table.add_argument("--in", dest="in_dir", required=True)
    table.set_defaults(fn=cmd_table)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
