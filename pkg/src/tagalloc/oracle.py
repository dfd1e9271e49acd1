"""Exact solver for the tag-assignment integer program at desk scale, plus a
feasibility auditor usable on any allocation.

The search maximizes the number of handled tags: tag subsets are explored in
decreasing size (lexicographic within a size, which canonicalizes the
witness), and for each subset a depth-first search assigns pairwise-disjoint
per-zone slot covers under the budget.  Cost lower bounds (each tag's
cheapest standalone cover) prune the search.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .influence import _dense, zonal_influence
from .model import Allocation, Instance


@dataclass(frozen=True)
class OracleLimits:
    max_slots: int = 12
    max_tags: int = 4
    node_budget: int = 2_000_000

    def __post_init__(self):
        if self.max_slots <= 0 or self.max_tags <= 0 or self.node_budget <= 0:
            raise ValueError("oracle limits must be positive")


@dataclass(frozen=True)
class OracleResult:
    optimum: int
    witness: Allocation
    nodes_explored: int
    timed_out: bool


class _NodeBudgetExhausted(Exception):
    pass


def _feasible_zone_subsets(instance: Instance, zone_id: int, available: set[int],
                           demand: float, tag_id: int) -> list[tuple[int, tuple[int, ...]]]:
    """All subsets of the zone's available slots meeting the demand, as
    (cost, ids) sorted by cost then ids."""
    dense = _dense(instance)
    ids = sorted(s for s in instance.zone_slot_ids(zone_id) if s in available)
    n = len(ids)
    if n == 0:
        return []
    rows = np.array([dense.prob[instance.slot_index(s)] for s in ids])
    costs = [instance.cost(s, tag_id) for s in ids]
    out: list[tuple[int, tuple[int, ...]]] = []
    n_traj = len(instance.trajectories)
    for mask in range(1, 1 << n):
        sel = [i for i in range(n) if mask >> i & 1]
        residual = np.ones(n_traj)
        for i in sel:
            residual *= 1.0 - rows[i]
        if float(np.sum(1.0 - residual)) >= demand:
            out.append((sum(costs[i] for i in sel), tuple(ids[i] for i in sel)))
    out.sort()
    return out


def _cheapest_cover_cost(instance: Instance, tag_id: int) -> float:
    """Cost of the tag's cheapest standalone cover (all slots available);
    a valid lower bound since availability only shrinks during search."""
    total = 0
    for zone_id in instance.demanded_zones(tag_id):
        subsets = _feasible_zone_subsets(instance, zone_id,
                                         set(s.id for s in instance.slots),
                                         instance.demand(tag_id, zone_id), tag_id)
        if not subsets:
            return math.inf
        total += subsets[0][0]
    return float(total)


def exact_optimal(instance: Instance, limits: OracleLimits | None = None) -> OracleResult:
    """Exhaustively find the maximum number of simultaneously handleable tags."""
    limits = limits or OracleLimits()
    if len(instance.slots) > limits.max_slots:
        raise ValueError(f"instance has {len(instance.slots)} slots,"
                         f" oracle limit is {limits.max_slots}")
    if len(instance.tags) > limits.max_tags:
        raise ValueError(f"instance has {len(instance.tags)} tags,"
                         f" oracle limit is {limits.max_tags}")

    nodes = 0
    lower_bound = {t: _cheapest_cover_cost(instance, t) for t in instance.tags}
    tags_sorted = sorted(instance.tags)
    empty = Allocation.empty(instance.tags)

    def search(combo, idx, available: set[int], spent: int,
               chosen: dict[int, frozenset[int]]) -> dict[int, frozenset[int]] | None:
        nonlocal nodes
        if idx == len(combo):
            return dict(chosen)
        remaining_lb = sum(lower_bound[t] for t in combo[idx:])
        if spent + remaining_lb > instance.budget:
            return None
        tag = combo[idx]
        # Zone-by-zone DFS for this tag's cover.
        zones = instance.demanded_zones(tag)

        def per_zone(zi, avail: set[int], cost_so_far: int,
                     picked: set[int]) -> dict[int, frozenset[int]] | None:
            nonlocal nodes
            if zi == len(zones):
                chosen[tag] = frozenset(picked)
                result = search(combo, idx + 1, avail, spent + cost_so_far, chosen)
                if result is None:
                    del chosen[tag]
                return result
            zone_id = zones[zi]
            demand = instance.demand(tag, zone_id)
            for cost, ids in _feasible_zone_subsets(instance, zone_id, avail,
                                                    demand, tag):
                nodes += 1
                if nodes > limits.node_budget:
                    raise _NodeBudgetExhausted
                if spent + cost_so_far + cost > instance.budget:
                    break  # subsets sorted by cost
                result = per_zone(zi + 1, avail - set(ids), cost_so_far + cost,
                                  picked | set(ids))
                if result is not None:
                    return result
            return None

        return per_zone(0, available, 0, set())

    all_slots = set(s.id for s in instance.slots)
    try:
        for size in range(len(tags_sorted), 0, -1):
            for combo in itertools.combinations(tags_sorted, size):
                if sum(lower_bound[t] for t in combo) > instance.budget:
                    continue
                found = search(combo, 0, all_slots, 0, {})
                if found is not None:
                    handled = {t: t in found for t in instance.tags}
                    total = sum(instance.cost(s, t)
                                for t, ss in found.items() for s in ss)
                    witness = Allocation(assignments=found, handled=handled,
                                         total_cost=total)
                    return OracleResult(optimum=size, witness=witness,
                                        nodes_explored=nodes, timed_out=False)
    except _NodeBudgetExhausted:
        return OracleResult(optimum=0, witness=empty, nodes_explored=nodes,
                            timed_out=True)
    return OracleResult(optimum=0, witness=empty, nodes_explored=nodes,
                        timed_out=False)


def verify_allocation(instance: Instance, allocation: Allocation) -> list[str]:
    """Audit an allocation against the integer program's constraints.

    Checks, in order: budget (1), per-handled-tag per-demanded-zone influence
    demand (2, the per-zone reading), slot exclusivity (3), and flag/domain
    consistency (4-5).  Empty report = feasible.
    """
    report: list[str] = []

    total = 0
    for tag, slot_ids in allocation.assignments.items():
        if tag not in allocation.handled:
            report.append(f"constraint 5: assignment for unknown tag {tag}")
            continue
        for sid in slot_ids:
            if not instance.has_slot(sid):
                report.append(f"constraint 4: unknown slot id {sid} for tag {tag}")
            else:
                total += instance.cost(sid, tag)
    if total > instance.budget:
        report.append(f"constraint 1: total cost {total} exceeds budget"
                      f" {instance.budget}")
    if total != allocation.total_cost:
        report.append(f"constraint 1: recorded total_cost {allocation.total_cost}"
                      f" != recomputed {total}")

    for tag, is_handled in allocation.handled.items():
        if not is_handled:
            continue
        slot_ids = allocation.assignments.get(tag, frozenset())
        for zone_id in instance.demanded_zones(tag):
            demand = instance.demand(tag, zone_id)
            got = zonal_influence(slot_ids, zone_id, instance)
            if got < demand:
                report.append(
                    f"constraint 2: tag {tag} zone {zone_id} influence {got:.6f}"
                    f" below demand {demand:.6f} (deficit {demand - got:.6f})")

    seen: dict[int, int] = {}
    for tag, slot_ids in allocation.assignments.items():
        for sid in slot_ids:
            if sid in seen:
                report.append(f"constraint 3: slot {sid} assigned to tags"
                              f" {seen[sid]} and {tag}")
            seen[sid] = tag

    return report
