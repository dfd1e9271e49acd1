"""Comparison methods: uniform random slot selection and top-influence
selection.  Both process tags in ascending id order and apply the same
per-tag budget check: a tag is committed only when its drawn slots fit the
remaining budget, otherwise the slots return to the pool."""

from __future__ import annotations

import random

from .influence import _dense
from .model import Allocation, Instance


def _commit(instance, tag, per_zone_picks, remaining, spent):
    """Cost the union of per-zone picks and decide whether it fits the budget.
    Returns (cost, slot_set) on commit, None otherwise."""
    union: set[int] = set()
    for picks in per_zone_picks.values():
        union |= set(picks)
    cost = sum(instance.cost(s, tag) for s in union)
    if spent + cost > instance.budget:
        return None
    return cost, frozenset(union)


def random_assign(instance: Instance, seed: int) -> Allocation:
    """Draw slots uniformly at random (without replacement) from each demanded
    zone until its demand is met; deterministic for a fixed seed."""
    rng = random.Random(seed)
    dense = _dense(instance)
    remaining = set(s.id for s in instance.slots)
    assignments: dict[int, frozenset[int]] = {}
    handled = {t: False for t in instance.tags}
    spent = 0

    for tag in sorted(instance.tags):
        per_zone: dict[int, list[int]] = {}
        feasible = True
        for zone_id in instance.demanded_zones(tag):
            demand = instance.demand(tag, zone_id)
            pool = sorted(s for s in instance.zone_slot_ids(zone_id) if s in remaining)
            picks: list[int] = []
            while dense.influence_of(picks) < demand:
                if not pool:
                    feasible = False
                    break
                picks.append(pool.pop(rng.randrange(len(pool))))
            if not feasible:
                break
            per_zone[zone_id] = picks
        if not feasible:
            continue
        committed = _commit(instance, tag, per_zone, remaining, spent)
        if committed is None:
            continue
        cost, slot_set = committed
        assignments[tag] = slot_set
        handled[tag] = True
        spent += cost
        remaining -= slot_set

    return Allocation(assignments=assignments, handled=handled, total_cost=spent)


def topk_assign(instance: Instance) -> Allocation:
    """Per demanded zone, take slots in order of descending individual
    influence (ties by lowest id) until the zonal demand is met."""
    dense = _dense(instance)
    remaining = set(s.id for s in instance.slots)
    single = {s.id: dense.influence_of([s.id]) for s in instance.slots}
    assignments: dict[int, frozenset[int]] = {}
    handled = {t: False for t in instance.tags}
    spent = 0

    for tag in sorted(instance.tags):
        per_zone: dict[int, list[int]] = {}
        feasible = True
        for zone_id in instance.demanded_zones(tag):
            demand = instance.demand(tag, zone_id)
            pool = sorted((s for s in instance.zone_slot_ids(zone_id) if s in remaining),
                          key=lambda s: (-single[s], s))
            picks: list[int] = []
            while dense.influence_of(picks) < demand:
                if not pool:
                    feasible = False
                    break
                picks.append(pool.pop(0))
            if not feasible:
                break
            per_zone[zone_id] = picks
        if not feasible:
            continue
        committed = _commit(instance, tag, per_zone, remaining, spent)
        if committed is None:
            continue
        cost, slot_set = committed
        assignments[tag] = slot_set
        handled[tag] = True
        spent += cost
        remaining -= slot_set

    return Allocation(assignments=assignments, handled=handled, total_cost=spent)
