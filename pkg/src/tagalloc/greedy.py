"""Cost-effective greedy assignment of tags to billboard slots.

The outer loop repeatedly builds, for every unhandled tag, the cheapest slot
set covering all of its zonal demands, commits the overall cheapest tag while
the budget allows, and stops at the first unaffordable cheapest candidate.

The per-zone minimum-cost coverage subproblem is itself NP-hard; it is solved
either by density greedy (marginal influence per unit cost) or, for small
zones, by exact subset enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .influence import _dense
from .model import Allocation, Instance


@dataclass(frozen=True)
class SolverConfig:
    inner_solver: str = "greedy-density"   # or "exact-small"
    exact_threshold: int = 15              # max zone slot count for exact enumeration
    skip_unaffordable: bool = False        # non-default variant: skip instead of break

    def __post_init__(self):
        if self.inner_solver not in ("greedy-density", "exact-small"):
            raise ValueError(f"unknown inner solver {self.inner_solver!r}")
        if self.exact_threshold < 0:
            raise ValueError("exact_threshold must be >= 0")


@dataclass(frozen=True)
class TagCandidate:
    tag_id: int
    slot_set: frozenset[int]
    cost: float  # integer-valued, or math.inf when some demanded zone is infeasible

    @property
    def feasible(self) -> bool:
        return math.isfinite(self.cost)


def _cover_exact(instance: Instance, slot_ids: list[int], demand: float,
                 tag_id: int) -> list[int] | None:
    """Minimum-cost subset of slot_ids whose joint influence meets demand,
    by exhaustive enumeration.  Ties broken by the numerically smallest
    bitmask over slots in ascending-id order, which prefers lower ids."""
    dense = _dense(instance)
    ids = sorted(slot_ids)
    n = len(ids)
    rows = np.array([dense.prob[instance.slot_index(s)] for s in ids])
    costs = [instance.cost(s, tag_id) for s in ids]
    best_cost = math.inf
    best_mask = None
    for mask in range(1, 1 << n):
        cost = sum(costs[i] for i in range(n) if mask >> i & 1)
        if cost > best_cost or (cost == best_cost and best_mask is not None):
            continue
        sel = [i for i in range(n) if mask >> i & 1]
        residual = np.ones(rows.shape[1])
        for i in sel:
            residual *= 1.0 - rows[i]
        if float(np.sum(1.0 - residual)) >= demand:
            best_cost = cost
            best_mask = sel
    if best_mask is None:
        return None
    return [ids[i] for i in best_mask]


def _cover_greedy_density(instance: Instance, slot_ids: list[int], demand: float,
                          tag_id: int) -> list[int] | None:
    """Build a cover by repeatedly taking the slot with the best marginal
    influence per unit cost (zero-cost slots with positive gain first),
    ties by lowest slot id."""
    dense = _dense(instance)
    ids = sorted(slot_ids)
    rows = np.array([dense.prob[instance.slot_index(s)] for s in ids])
    costs = np.array([instance.cost(s, tag_id) for s in ids], dtype=float)
    residual = np.ones(rows.shape[1])
    available = list(range(len(ids)))
    selected: list[int] = []
    covered = 0.0
    while covered < demand and available:
        gains = rows[available] @ residual
        with np.errstate(divide="ignore", invalid="ignore"):
            density = np.where(costs[available] > 0, gains / costs[available],
                               np.where(gains > 0, np.inf, 0.0))
        best = int(np.argmax(density))  # first occurrence = lowest slot id
        if gains[best] <= 0.0:
            break
        pick = available.pop(best)
        selected.append(pick)
        residual *= 1.0 - rows[pick]
        covered = dense.influence_of([ids[i] for i in selected])
    if covered >= demand:
        return sorted(ids[i] for i in selected)
    # Float-boundary fallback: the feasibility pre-check passed on the full
    # set, so take everything rather than report a spurious infeasibility.
    if dense.influence_of(ids) >= demand:
        return ids
    return None


def min_cost_zone_cover(zone_id: int, available_slots, demand: float, tag_id: int,
                        instance: Instance,
                        config: SolverConfig | None = None) -> frozenset[int] | None:
    """Slot set within one zone meeting the zonal demand at low cost, or
    ``None`` when even all available slots together fall short."""
    config = config or SolverConfig()
    instance.tag_index(tag_id)  # raises on unknown tag
    in_zone = set(instance.zone_slot_ids(zone_id))  # raises on unknown zone
    ids = sorted(s for s in available_slots if s in in_zone)
    if demand <= 0:
        return frozenset()
    dense = _dense(instance)
    if dense.influence_of(ids) < demand:
        return None
    use_exact = (config.inner_solver == "exact-small"
                 and len(ids) <= config.exact_threshold)
    if use_exact:
        cover = _cover_exact(instance, ids, demand, tag_id)
    else:
        cover = _cover_greedy_density(instance, ids, demand, tag_id)
    return None if cover is None else frozenset(cover)


def build_candidate(tag_id: int, remaining_slots, instance: Instance,
                    config: SolverConfig | None = None) -> TagCandidate:
    """Union of per-zone covers over all of the tag's demanded zones; cost is
    infinite as soon as any demanded zone cannot be covered."""
    config = config or SolverConfig()
    remaining = set(remaining_slots)
    union: set[int] = set()
    for zone_id in instance.demanded_zones(tag_id):
        cover = min_cost_zone_cover(zone_id, remaining, instance.demand(tag_id, zone_id),
                                    tag_id, instance, config)
        if cover is None:
            return TagCandidate(tag_id=tag_id, slot_set=frozenset(), cost=math.inf)
        union |= cover
    cost = sum(instance.cost(s, tag_id) for s in union)
    return TagCandidate(tag_id=tag_id, slot_set=frozenset(union), cost=float(cost))


def ceg_assign(instance: Instance, config: SolverConfig | None = None) -> Allocation:
    """Run the full greedy assignment and return a budget-feasible allocation."""
    config = config or SolverConfig()
    remaining = set(s.id for s in instance.slots)
    unhandled = sorted(instance.tags)
    assignments: dict[int, frozenset[int]] = {}
    handled = {t: False for t in instance.tags}
    spent = 0

    while unhandled:
        candidates = [build_candidate(t, remaining, instance, config) for t in unhandled]
        best = min(candidates, key=lambda c: (c.cost, c.tag_id))
        if not best.feasible or spent + best.cost > instance.budget:
            if config.skip_unaffordable:
                unhandled.remove(best.tag_id)
                continue
            break
        assignments[best.tag_id] = best.slot_set
        handled[best.tag_id] = True
        spent += int(best.cost)
        unhandled.remove(best.tag_id)
        remaining -= best.slot_set

    return Allocation(assignments=assignments, handled=handled, total_cost=spent)


def allocation_cost(allocation: Allocation, instance: Instance) -> int:
    """Recompute the total assignment cost; raises KeyError on dangling ids."""
    total = 0
    for tag, slot_ids in allocation.assignments.items():
        for sid in slot_ids:
            total += instance.cost(sid, tag)
    return total
