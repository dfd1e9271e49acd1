"""Benchmark harness: parameter sweeps over synthetic instances, delimited
metric reports, and runtime scaling measurements.

Per-cell seeds are derived from the master seed by a counter scheme:
``cell_seed = master_seed + cell_index``, where cells are numbered in the
canonical iteration order (theta, (delta, tag count), lambda, repetition).
"""

from __future__ import annotations

import csv
import json
import math
import statistics
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

from .baselines import random_assign, topk_assign
from .greedy import SolverConfig, ceg_assign
from .influence import influence
from .model import Allocation, Instance
from .oracle import OracleLimits, exact_optimal, verify_allocation
from .scenario import ScenarioParams, gen_synthetic

TABLE1_DELTA_TAG_PAIRS = ((0.01, 100), (0.02, 50), (0.05, 20), (0.10, 10))


class SweepAuditError(RuntimeError):
    """A solver produced an infeasible allocation during a sweep."""


@dataclass(frozen=True)
class SweepConfig:
    theta_list: tuple[float, ...] = (0.4, 0.6, 0.8, 1.0, 1.2)
    delta_tag_pairs: tuple[tuple[float, int], ...] = TABLE1_DELTA_TAG_PAIRS
    lambda_list: tuple[float, ...] = (100.0,)
    methods: tuple[str, ...] = ("ceg", "random", "topk")
    repetitions: int = 3
    seed: int = 0
    billboard_count: int = 20
    trajectory_count: int = 100
    zone_count: int = 3
    horizon: tuple[int, int, int] = (0, 4, 2)
    inner_solver: str = "greedy-density"

    def __post_init__(self):
        if not self.theta_list or not self.delta_tag_pairs or not self.lambda_list:
            raise ValueError("sweep lists must be non-empty")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        for m in self.methods:
            if m not in ("ceg", "random", "topk", "oracle"):
                raise ValueError(f"unknown method {m!r}")


@dataclass(frozen=True)
class MetricsRecord:
    method: str
    theta: float
    delta: float
    tags: int
    lam: float
    seed: int
    handled_tags: int
    utilized_cost: int
    runtime_ms: float
    total_influence: float


REPORT_COLUMNS = ("method", "theta", "delta", "tags", "lam", "seed",
                  "handled_tags", "utilized_cost", "runtime_ms",
                  "total_influence")


def _solve(method: str, instance: Instance, seed: int,
           solver_config: SolverConfig) -> Allocation | None:
    if method == "ceg":
        return ceg_assign(instance, solver_config)
    if method == "random":
        return random_assign(instance, seed)
    if method == "topk":
        return topk_assign(instance)
    if method == "oracle":
        limits = OracleLimits()
        if (len(instance.slots) > limits.max_slots
                or len(instance.tags) > limits.max_tags):
            return None
        return exact_optimal(instance, limits).witness
    raise ValueError(f"unknown method {method!r}")


def run_sweep(config: SweepConfig, progress=None) -> list[MetricsRecord]:
    """Run every sweep cell, audit every allocation, return canonical-order
    metric records.  Raises SweepAuditError on any feasibility violation."""
    solver_config = SolverConfig(inner_solver=config.inner_solver)
    records: list[MetricsRecord] = []
    counter = 0
    for theta in config.theta_list:
        for delta, tag_count in config.delta_tag_pairs:
            for lam in config.lambda_list:
                for rep in range(config.repetitions):
                    cell_seed = config.seed + counter
                    counter += 1
                    params = ScenarioParams(
                        theta=theta, delta=delta, tag_count=tag_count, lam=lam,
                        zone_count=config.zone_count, horizon=config.horizon,
                        seed=cell_seed, billboard_count=config.billboard_count,
                        trajectory_count=config.trajectory_count)
                    instance = gen_synthetic(params)
                    for method in config.methods:
                        t0 = time.perf_counter()
                        allocation = _solve(method, instance, cell_seed, solver_config)
                        runtime_ms = (time.perf_counter() - t0) * 1000.0
                        if allocation is None:
                            # Oracle limits exceeded: skip the cell for this method.
                            continue
                        audit = verify_allocation(instance, allocation)
                        if audit:
                            raise SweepAuditError(
                                f"method {method}, theta {theta}, delta {delta},"
                                f" seed {cell_seed}: " + "; ".join(audit))
                        records.append(MetricsRecord(
                            method=method, theta=theta, delta=delta,
                            tags=tag_count, lam=lam, seed=cell_seed,
                            handled_tags=allocation.handled_count(),
                            utilized_cost=allocation.total_cost,
                            runtime_ms=runtime_ms,
                            total_influence=influence(allocation.assigned_slots(),
                                                      instance)))
                    if progress is not None:
                        progress(counter)
    return records


def emit_report(records, fmt: str, path) -> Path:
    """Write records as CSV or JSON with a stable column order; identical
    records produce identical bytes."""
    if not records:
        raise ValueError("no records to emit")
    path = Path(path)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(REPORT_COLUMNS)
            for r in records:
                writer.writerow([getattr(r, c) for c in REPORT_COLUMNS])
    elif fmt == "json":
        rows = [{c: getattr(r, c) for c in REPORT_COLUMNS} for r in records]
        path.write_text(json.dumps(rows, sort_keys=True, indent=2) + "\n")
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return path


@dataclass(frozen=True)
class ScalingResult:
    axis: str
    base_ms: float
    doubled_ms: float

    @property
    def ratio(self) -> float:
        return self.doubled_ms / self.base_ms if self.base_ms > 0 else math.inf

    @property
    def exponent(self) -> float:
        return math.log2(self.ratio) if self.ratio > 0 else math.inf


def _median_solve_ms(params: ScenarioParams, repetitions: int) -> float:
    instance = gen_synthetic(params)
    times = []
    for _ in range(repetitions):
        t0 = time.perf_counter()
        ceg_assign(instance)
        times.append((time.perf_counter() - t0) * 1000.0)
    return statistics.median(times)


def bench_scaling(base: ScenarioParams | None = None, axes=("tags", "zones",
                  "slots", "trajectories"), repetitions: int = 5) -> list[ScalingResult]:
    """Median CEG wall time at a base configuration versus each axis doubled
    independently (tag count k, zone count l, slot count m, trajectory
    count t)."""
    base = base or ScenarioParams(billboard_count=24, trajectory_count=200,
                                  tag_count=12, zone_count=3, theta=0.8)
    results = []
    base_ms = _median_solve_ms(base, repetitions)
    for axis in axes:
        if axis == "tags":
            doubled = replace(base, tag_count=base.tag_count * 2)
        elif axis == "zones":
            doubled = replace(base, zone_count=base.zone_count * 2)
        elif axis == "slots":
            doubled = replace(base, billboard_count=base.billboard_count * 2)
        elif axis == "trajectories":
            doubled = replace(base, trajectory_count=base.trajectory_count * 2)
        else:
            raise ValueError(f"unknown scaling axis {axis!r}")
        results.append(ScalingResult(axis=axis, base_ms=base_ms,
                                     doubled_ms=_median_solve_ms(doubled, repetitions)))
    return results
