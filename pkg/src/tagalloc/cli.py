"""Command-line interface.

Subcommands: ``generate`` (synthetic instance snapshot), ``solve`` (one
method on one instance), ``sweep`` (benchmark grid with CSV/JSON report and
optional figures), ``bench`` (runtime scaling), ``verify`` (feasibility
audit).  Exit codes: 0 success, 1 audit failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .baselines import random_assign, topk_assign
from .greedy import SolverConfig, ceg_assign
from .model import validate_instance
from .oracle import OracleLimits, exact_optimal, verify_allocation
from .scenario import (ScenarioParams, gen_synthetic, load_allocation,
                       load_instance, save_allocation, save_instance)
from .sweep import (SweepAuditError, SweepConfig, bench_scaling, emit_report,
                    run_sweep)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tagalloc",
        description="Assign advertiser tags to billboard slots under zonal"
                    " influence demands and a budget.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a synthetic instance snapshot")
    gen.add_argument("--out", required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--theta", type=float, default=1.0)
    gen.add_argument("--delta", type=float, default=0.05)
    gen.add_argument("--tags", type=int, default=20)
    gen.add_argument("--zones", type=int, default=3)
    gen.add_argument("--billboards", type=int, default=12)
    gen.add_argument("--trajectories", type=int, default=60)
    gen.add_argument("--lam", type=float, default=100.0,
                     help="influence radius in meters")
    gen.add_argument("--horizon", type=int, nargs=3, default=(0, 4, 2),
                     metavar=("T1", "T2", "DELTA"))

    solve = sub.add_parser("solve", help="run one method on an instance")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--method", required=True,
                       choices=["ceg", "random", "topk", "oracle"])
    solve.add_argument("--inner-solver", default="greedy-density",
                       choices=["greedy-density", "exact-small"])
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--out", help="write the allocation to this path")

    sweep = sub.add_parser("sweep", help="run a benchmark sweep")
    sweep.add_argument("--config", help="TOML sweep configuration")
    sweep.add_argument("--out", required=True, help="report output path")
    sweep.add_argument("--format", default="csv", choices=["csv", "json"])
    sweep.add_argument("--plots-dir",
                       help="also render summary figures into this directory")

    bench = sub.add_parser("bench", help="measure runtime scaling")
    bench.add_argument("--scaling-axis", default="all",
                       choices=["tags", "zones", "slots", "trajectories", "all"])
    bench.add_argument("--repetitions", type=int, default=5)

    verify = sub.add_parser("verify", help="audit an allocation against an instance")
    verify.add_argument("--instance", required=True)
    verify.add_argument("--allocation", required=True)

    return parser


def _load_sweep_config(path: str | None) -> SweepConfig:
    if path is None:
        return SweepConfig()
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    kwargs = {}
    for key in ("theta_list", "lambda_list", "methods"):
        if key in data:
            kwargs[key] = tuple(data[key])
    if "delta_tag_pairs" in data:
        kwargs["delta_tag_pairs"] = tuple((float(d), int(k))
                                          for d, k in data["delta_tag_pairs"])
    for key in ("repetitions", "seed", "billboard_count", "trajectory_count",
                "zone_count", "inner_solver"):
        if key in data:
            kwargs[key] = data[key]
    if "horizon" in data:
        kwargs["horizon"] = tuple(data["horizon"])
    return SweepConfig(**kwargs)


def _cmd_generate(args) -> int:
    params = ScenarioParams(theta=args.theta, delta=args.delta, tag_count=args.tags,
                            lam=args.lam, zone_count=args.zones,
                            horizon=tuple(args.horizon), seed=args.seed,
                            billboard_count=args.billboards,
                            trajectory_count=args.trajectories)
    instance = gen_synthetic(params)
    save_instance(instance, args.out)
    print(f"wrote instance: {len(instance.slots)} slots, {len(instance.tags)} tags,"
          f" {len(instance.trajectories)} trajectories, budget {instance.budget}"
          f" -> {args.out}")
    return 0


def _cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    problems = validate_instance(instance)
    if problems:
        print("instance invalid:", file=sys.stderr)
        for p in problems:
            print(f"  {p}", file=sys.stderr)
        return 1
    if args.method == "ceg":
        allocation = ceg_assign(instance, SolverConfig(inner_solver=args.inner_solver))
    elif args.method == "random":
        allocation = random_assign(instance, args.seed)
    elif args.method == "topk":
        allocation = topk_assign(instance)
    else:
        result = exact_optimal(instance, OracleLimits())
        if result.timed_out:
            print("oracle timed out (node budget exhausted)", file=sys.stderr)
        allocation = result.witness
    audit = verify_allocation(instance, allocation)
    if audit:
        print("allocation failed audit:", file=sys.stderr)
        for line in audit:
            print(f"  {line}", file=sys.stderr)
        return 1
    print(f"{args.method}: handled {allocation.handled_count()}/{len(instance.tags)}"
          f" tags, cost {allocation.total_cost}/{instance.budget}")
    if args.out:
        save_allocation(allocation, args.out)
        print(f"wrote allocation -> {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    config = _load_sweep_config(args.config)
    try:
        records = run_sweep(config)
    except SweepAuditError as e:
        print(f"sweep aborted: {e}", file=sys.stderr)
        return 1
    emit_report(records, args.format, args.out)
    print(f"wrote {len(records)} records -> {args.out}")
    if args.plots_dir:
        from .plots import render_figures
        for path in render_figures(records, args.plots_dir):
            print(f"wrote figure -> {path}")
    return 0


def _cmd_bench(args) -> int:
    axes = (("tags", "zones", "slots", "trajectories")
            if args.scaling_axis == "all" else (args.scaling_axis,))
    results = bench_scaling(axes=axes, repetitions=args.repetitions)
    print(f"{'axis':<14}{'base ms':>10}{'x2 ms':>10}{'ratio':>8}{'exponent':>10}")
    for r in results:
        print(f"{r.axis:<14}{r.base_ms:>10.2f}{r.doubled_ms:>10.2f}"
              f"{r.ratio:>8.2f}{r.exponent:>10.2f}")
    return 0


def _cmd_verify(args) -> int:
    instance = load_instance(args.instance)
    allocation = load_allocation(args.allocation)
    audit = verify_allocation(instance, allocation)
    if audit:
        print("allocation infeasible:")
        for line in audit:
            print(f"  {line}")
        return 1
    print("allocation feasible")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"generate": _cmd_generate, "solve": _cmd_solve,
                "sweep": _cmd_sweep, "bench": _cmd_bench, "verify": _cmd_verify}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
