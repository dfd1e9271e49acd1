"""Shared builders and independent reference implementations.

The reference influence evaluator here is a from-scratch pure-Python pass
over the sparse probability entries, deliberately separate from the
library's vectorized path, so the two can cross-check each other.
"""

from __future__ import annotations

import itertools
import math
import random

import pytest

from tagalloc.model import (Billboard, CostMatrix, DemandMatrix, Instance,
                            ProbabilityMatrix, Trajectory, ZoneBox, ZoneMap)
from tagalloc.scenario import enumerate_slots


def build_instance(*, bb_zones=(0,), zone_count=None, prob_entries=None, n_traj=1,
                   n_tags=1, demand_rows=None, cost_rows=None, budget=100,
                   slots_per_bb=1):
    """Hand-assembled instance: zone z is the latitude band [z, z+1), billboard
    i sits in the middle of its zone, probabilities are given explicitly."""
    zone_count = zone_count if zone_count is not None else max(bb_zones) + 1
    zones = tuple(ZoneBox(id=z, lat_min=float(z), lat_max=float(z + 1),
                          lon_min=0.0, lon_max=1.0) for z in range(zone_count))
    billboards = [Billboard(id=i, lat=z + 0.5, lon=0.5, zone_id=z)
                  for i, z in enumerate(bb_zones)]
    slots = enumerate_slots(billboards, 0, slots_per_bb, 1)
    trajectories = [Trajectory(id=j, points=((0.5, 0.5, 0),)) for j in range(n_traj)]
    probs = ProbabilityMatrix(prob_entries or {})
    tags = list(range(n_tags))
    if demand_rows is None:
        demand_rows = [[1.0] + [0.0] * (zone_count - 1) for _ in tags]
    if cost_rows is None:
        cost_rows = [[1] * n_tags for _ in slots]
    return Instance(billboards, slots, trajectories, probs, ZoneMap(zones),
                    tags, DemandMatrix(demand_rows), CostMatrix(cost_rows), budget)


def influence_reference(slot_ids, instance) -> float:
    """From-scratch coverage evaluation over the sparse entries."""
    total = 0.0
    for t in instance.trajectories:
        prod = 1.0
        for sid in slot_ids:
            b = instance.billboard_of_slot(sid)
            prod *= 1.0 - instance.probabilities.get(b.id, t.id)
        total += 1.0 - prod
    return total


def zonal_influence_reference(slot_ids, zone_id, instance) -> float:
    in_zone = set(instance.zone_slot_ids(zone_id))
    return influence_reference([s for s in slot_ids if s in in_zone], instance)


def min_cover_bruteforce(instance, zone_id, available, demand, tag_id):
    """Exhaustive min-cost zone cover using only the reference evaluator.
    Returns (cost, slot ids) or None."""
    in_zone = sorted(set(instance.zone_slot_ids(zone_id)) & set(available))
    if demand <= 0:
        return (0, ())
    best = None
    for r in range(1, len(in_zone) + 1):
        for combo in itertools.combinations(in_zone, r):
            if influence_reference(combo, instance) >= demand:
                cost = sum(instance.cost(s, tag_id) for s in combo)
                if best is None or (cost, combo) < best:
                    best = (cost, combo)
    return best


def random_instance(rng: random.Random, *, n_bb=4, slots_per_bb=2, n_traj=6,
                    n_zones=2, n_tags=3, demand_scale=(0.2, 0.8),
                    budget_scale=(0.3, 1.5), allow_zero_cost=True):
    """Seeded random instance with demands drawn as a fraction of each zone's
    joint influence, so feasibility is common but not guaranteed."""
    bb_zones = tuple(rng.randrange(n_zones) for _ in range(n_bb))
    if len(set(bb_zones)) < n_zones:  # every zone needs at least a chance of slots
        bb_zones = tuple(i % n_zones for i in range(n_bb))
    entries = {}
    for b in range(n_bb):
        for t in range(n_traj):
            if rng.random() < 0.5:
                entries[(b, t)] = rng.uniform(0.05, 1.0)
    inst0 = build_instance(bb_zones=bb_zones, zone_count=n_zones,
                           prob_entries=entries, n_traj=n_traj, n_tags=n_tags,
                           slots_per_bb=slots_per_bb,
                           demand_rows=[[1.0] * n_zones] * n_tags)
    zone_joint = [influence_reference(inst0.zone_slot_ids(z), inst0)
                  for z in range(n_zones)]
    demand_rows = []
    for _ in range(n_tags):
        n_demanded = rng.randint(1, n_zones)
        zones = rng.sample(range(n_zones), n_demanded)
        row = [0.0] * n_zones
        for z in zones:
            row[z] = max(1e-6, rng.uniform(*demand_scale) * max(zone_joint[z], 0.5))
        demand_rows.append(row)
    m = n_bb * slots_per_bb
    lo = 0 if allow_zero_cost else 1
    cost_rows = [[rng.randint(lo, 5)] * n_tags for _ in range(m)]
    total_cost = sum(r[0] for r in cost_rows)
    budget = int(rng.uniform(*budget_scale) * max(total_cost, 1))
    return build_instance(bb_zones=bb_zones, zone_count=n_zones,
                          prob_entries=entries, n_traj=n_traj, n_tags=n_tags,
                          slots_per_bb=slots_per_bb, demand_rows=demand_rows,
                          cost_rows=cost_rows, budget=budget)
