"""Benchmark harness: run solver variants over instance suites, persist
per-run traces, and aggregate shifted geometric means and performance
profiles.
"""

import csv
import time
from dataclasses import dataclass
from itertools import product
from pathlib import Path

import numpy as np

from .dca import DcaConfig, dca_solve
from .problems import gen_hard_dc, gen_quadratic_dc, initial_point, qap_dc_oracles
from .qaplib import parse_qaplib, scan_directory

# variant name -> the solver features it switches on
VARIANTS = {
    "DCA-FW": dict(subsolver="fw", stop_mode="fixed", warm_start=False, boosted=False),
    "DCA-FW-ES": dict(subsolver="fw", stop_mode="adaptive", warm_start=False, boosted=False),
    "DCA-BPCG": dict(subsolver="bpcg", stop_mode="fixed", warm_start=False, boosted=False),
    "DCA-BPCG-ES": dict(subsolver="bpcg", stop_mode="adaptive", warm_start=False, boosted=False),
    "DCA-BPCG-WS": dict(subsolver="bpcg", stop_mode="fixed", warm_start=True, boosted=False),
    "DCA-BPCG-WS-ES": dict(subsolver="bpcg", stop_mode="adaptive", warm_start=True, boosted=False),
    "DCA-BPCG-WS-ES-BT": dict(subsolver="bpcg", stop_mode="adaptive", warm_start=True, boosted=True),
}

TRACE_FIELDS = [
    "t",
    "dc_gap_lb",
    "dc_gap_ub",
    "objective",
    "lmo_calls_cum",
    "inner_iters",
    "elapsed_s",
]
RESULT_FIELDS = [
    "instance",
    "variant",
    "n",
    "seed",
    "solved",
    "outer_iters",
    "wall_s",
    "lmo_calls",
    "final_obj",
    "reason",
]

METRICS = ("iters", "time", "lmo")


def variant_config(name, **overrides):
    """DcaConfig for a named variant; overrides must not contradict the name."""
    if name not in VARIANTS:
        raise ValueError(f"unknown variant {name!r}, choose from {sorted(VARIANTS)}")
    fields = dict(VARIANTS[name])
    for key in ("subsolver", "stop_mode", "warm_start", "boosted"):
        if key in overrides:
            if overrides[key] != fields[key]:
                raise ValueError(
                    f"override {key}={overrides[key]!r} contradicts variant {name}"
                )
            overrides = {k: v for k, v in overrides.items() if k != key}
    return DcaConfig(**fields, **overrides)


def default_caps(suite, n):
    """(outer, inner) iteration caps: larger instances get the larger budget."""
    if suite == "qap" or n >= 100:
        return 500, 50000
    return 200, 10000


@dataclass
class BenchResult:
    """Summary row of a single (instance, variant) run."""

    instance: str
    variant: str
    n: int
    seed: int
    solved: bool
    outer_iters: int
    wall_seconds: float
    lmo_calls: int
    final_objective: float
    reason: str
    trace_path: str = ""


def _iter_instances(suite, sizes, seeds, qaplib_dir):
    if suite in ("quadratics", "hard"):
        gen = gen_quadratic_dc if suite == "quadratics" else gen_hard_dc
        tag = "quad" if suite == "quadratics" else "hard"
        for n, seed in product(sizes, seeds):
            inst = gen(n, seed)
            yield f"{tag}-n{n}-s{seed}", n, seed, inst.problem
        return
    if suite == "qap":
        if qaplib_dir is None:
            raise ValueError("the qap suite needs a directory of instance files")
        report = scan_directory(qaplib_dir)
        limit = max(sizes) if sizes else None
        for name in report.valid:
            inst = parse_qaplib((Path(qaplib_dir) / f"{name}.dat").read_bytes(), name)
            if limit is not None and inst.n > limit:
                continue
            yield name, inst.n, 0, (lambda inst=inst: qap_dc_oracles(inst))
        return
    raise ValueError(f"unknown suite {suite!r}")


def _write_trace(path, record):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_FIELDS)
        ubs = record.dc_gap_ub
        for t in range(record.outer_iters):
            writer.writerow(
                [
                    t,
                    repr(record.dc_gap_lb[t]),
                    repr(ubs[t]),
                    repr(record.objective[t]),
                    record.lmo_calls_cum[t],
                    record.inner_iters[t],
                    repr(record.elapsed_seconds[t]),
                ]
            )


def _append_result(path, result):
    new = not Path(path).exists()
    with open(path, "a", newline="") as fh:
        writer = csv.writer(fh)
        if new:
            writer.writerow(RESULT_FIELDS)
        writer.writerow(
            [
                result.instance,
                result.variant,
                result.n,
                result.seed,
                int(result.solved),
                result.outer_iters,
                repr(result.wall_seconds),
                result.lmo_calls,
                repr(result.final_objective),
                result.reason,
            ]
        )


def run_suite(
    suite,
    sizes,
    seeds,
    variants,
    *,
    qaplib_dir=None,
    out_dir=None,
    dca_gap_tol=1e-6,
    fw_gap_tol=None,
    outer_cap=None,
    inner_cap=None,
    time_limit=None,
    log=None,
):
    """Run every requested variant on every instance of a suite.

    suite is "quadratics", "hard", or "qap"; generated suites take the cross
    product of sizes and seeds, the qap suite reads *.dat files from
    qaplib_dir keeping instances with n <= max(sizes).  fw_gap_tol defaults
    to half of dca_gap_tol.  Results and per-run traces are written under
    out_dir as each run finishes; a failing run is recorded as unsolved and
    the suite continues.  Returns the list of BenchResult rows.
    """
    if fw_gap_tol is None:
        fw_gap_tol = dca_gap_tol / 2.0
    for v in variants:
        if v not in VARIANTS:
            raise ValueError(f"unknown variant {v!r}, choose from {sorted(VARIANTS)}")
    trace_dir = results_path = None
    if out_dir is not None:
        out = Path(out_dir)
        trace_dir = out / "traces"
        trace_dir.mkdir(parents=True, exist_ok=True)
        results_path = out / "results.csv"

    results = []
    for instance_id, n, seed, make_problem in _iter_instances(
        suite, sizes, seeds, qaplib_dir
    ):
        caps = default_caps(suite, n)
        outer = outer_cap if outer_cap is not None else caps[0]
        inner = inner_cap if inner_cap is not None else caps[1]
        for variant in variants:
            config = variant_config(
                variant,
                dca_gap_tol=dca_gap_tol,
                fw_gap_tol=fw_gap_tol,
                max_outer_iters=outer,
                max_inner_iters=inner,
                time_limit_seconds=time_limit,
            )
            problem = make_problem()  # fresh oracles and LMO counter per run
            x0 = initial_point(problem.lmo)
            started = time.perf_counter()
            try:
                x, record = dca_solve(problem, x0, config)
            except Exception as err:  # keep the suite going
                wall = time.perf_counter() - started
                result = BenchResult(
                    instance=instance_id,
                    variant=variant,
                    n=n,
                    seed=seed,
                    solved=False,
                    outer_iters=0,
                    wall_seconds=wall,
                    lmo_calls=problem.lmo.call_count,
                    final_objective=float("nan"),
                    reason=f"error:{type(err).__name__}",
                )
            else:
                wall = time.perf_counter() - started
                record.instance, record.variant = instance_id, variant
                record.n, record.seed = n, seed
                result = BenchResult(
                    instance=instance_id,
                    variant=variant,
                    n=n,
                    seed=seed,
                    solved=record.termination == "converged",
                    outer_iters=record.outer_iters,
                    wall_seconds=wall,
                    lmo_calls=problem.lmo.call_count,
                    final_objective=record.objective[-1]
                    if record.objective
                    else record.phi0,
                    reason=record.termination,
                )
                if trace_dir is not None:
                    path = trace_dir / f"{instance_id}__{variant}.csv"
                    _write_trace(path, record)
                    result.trace_path = str(path)
            if results_path is not None:
                _append_result(results_path, result)
            if log is not None:
                log(
                    f"{instance_id:>18} {variant:<18} solved={int(result.solved)} "
                    f"outer={result.outer_iters:<4} lmo={result.lmo_calls:<8} "
                    f"wall={result.wall_seconds:.2f}s {result.reason}"
                )
            results.append(result)
    return results


def load_results(in_dir):
    """Read results.csv written by run_suite back into BenchResult rows."""
    path = Path(in_dir) / "results.csv"
    if not path.exists():
        raise FileNotFoundError(f"no results.csv under {in_dir}")
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                BenchResult(
                    instance=rec["instance"],
                    variant=rec["variant"],
                    n=int(rec["n"]),
                    seed=int(rec["seed"]),
                    solved=bool(int(rec["solved"])),
                    outer_iters=int(rec["outer_iters"]),
                    wall_seconds=float(rec["wall_s"]),
                    lmo_calls=int(rec["lmo_calls"]),
                    final_objective=float(rec["final_obj"]),
                    reason=rec["reason"],
                )
            )
    return rows


def shifted_geomean(values, shift=1.0):
    """exp(mean(log(v + shift))) - shift over the given values."""
    v = np.asarray(list(values), dtype=float)
    if v.size == 0:
        raise ValueError("shifted_geomean of an empty sequence")
    if np.any(v + shift <= 0):
        raise ValueError(f"values must exceed -shift = {-shift}")
    return float(np.exp(np.mean(np.log(v + shift))) - shift)


def _metric_value(result, metric):
    if metric == "iters":
        return float(result.outer_iters)
    if metric == "time":
        return float(result.wall_seconds)
    if metric == "lmo":
        return float(result.lmo_calls)
    raise ValueError(f"unknown metric {metric!r}, choose from {METRICS}")


def performance_profile(results, metric, *, modified=False, thetas=None):
    """Performance profile curves over a set of benchmark results.

    For each instance, every variant's metric is divided by the best metric
    among variants that solved it; unsolved runs get an infinite ratio unless
    modified is set, in which case every run counts with its recorded metric
    (all instances treated as solved at their final iteration).  Returns
    (thetas, curves) where curves maps each variant to the fraction of
    instances with ratio <= theta, sampled on a log-spaced grid unless an
    explicit theta grid is given.
    """
    variants = list(dict.fromkeys(r.variant for r in results))
    instances = list(dict.fromkeys(r.instance for r in results))
    if not variants or not instances:
        raise ValueError("performance_profile needs at least one result")
    by_key = {(r.instance, r.variant): r for r in results}

    ratios = {s: [] for s in variants}
    for p in instances:
        vals = {}
        for s in variants:
            r = by_key.get((p, s))
            if r is None:
                continue
            if modified or r.solved:
                vals[s] = _metric_value(r, metric)
        best = min(vals.values()) if vals else np.inf
        best = max(best, 1e-300)
        for s in variants:
            ratios[s].append(vals[s] / best if s in vals else np.inf)

    if thetas is None:
        finite = [r for rs in ratios.values() for r in rs if np.isfinite(r)]
        top = max(finite) if finite else 1.0
        thetas = np.geomspace(1.0, max(top * 1.05, 1.0 + 1e-9), 64)
        thetas[0] = 1.0
    else:
        thetas = np.asarray(thetas, dtype=float)
    curves = {}
    for s in variants:
        rs = np.asarray(ratios[s])
        curves[s] = np.array([np.mean(rs <= t) for t in thetas])
    return thetas, curves


def write_profile(path, thetas, curves):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["theta", *curves.keys()])
        for i, t in enumerate(thetas):
            writer.writerow([repr(float(t)), *(repr(float(curves[s][i])) for s in curves)])


def summarize_table(results, shift=1.0):
    """Shifted-geomean summary rows per (n, variant).

    Every run counts, solved or not, so capped runs enter at their caps.  The
    per-size winner of each metric is flagged.  Returns a list of dicts with
    keys n, count, variant, iters, time, lmo, best_iters, best_time, best_lmo.
    """
    variants = list(dict.fromkeys(r.variant for r in results))
    rows = []
    for n in sorted({r.n for r in results}):
        group = [r for r in results if r.n == n]
        per_variant = []
        for s in variants:
            runs = [r for r in group if r.variant == s]
            if not runs:
                continue
            per_variant.append(
                {
                    "n": n,
                    "count": len(runs),
                    "variant": s,
                    "iters": shifted_geomean([r.outer_iters for r in runs], shift),
                    "time": shifted_geomean([r.wall_seconds for r in runs], shift),
                    "lmo": shifted_geomean([r.lmo_calls for r in runs], shift),
                }
            )
        for metric in METRICS:
            best = min(row[metric] for row in per_variant)
            for row in per_variant:
                row[f"best_{metric}"] = row[metric] == best
        rows.extend(per_variant)
    return rows


def format_table(rows):
    """Plain-text rendering of summarize_table rows; * flags the winner."""
    header = f"{'n':>6} {'runs':>4}  {'variant':<18} {'iters':>12} {'time_s':>12} {'lmo':>14}"
    lines = [header, "-" * len(header)]
    for row in rows:
        cells = []
        for metric, width in (("iters", 12), ("time", 12), ("lmo", 14)):
            mark = "*" if row[f"best_{metric}"] else " "
            cells.append(f"{row[metric]:>{width - 1}.2f}{mark}")
        lines.append(
            f"{row['n']:>6} {row['count']:>4}  {row['variant']:<18} "
            + " ".join(cells)
        )
    return "\n".join(lines)


def shifted_objective_traces(traces):
    """Shift each variant's objective trace by the minimum across variants.

    traces maps variant -> sequence of objective values; the same additive
    shift is applied to all variants so the best value becomes zero and every
    curve is nonnegative, which keeps log-scale plots defined.
    """
    low = min(min(vals) for vals in traces.values() if len(vals))
    return {s: [v - low for v in vals] for s, vals in traces.items()}
