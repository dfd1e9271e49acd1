"""Domain types for the billboard slot / tag assignment problem.

Everything here is immutable after construction and safe to share across
threads.  An :class:`Instance` bundles the full problem input: billboards,
their time slots, a trajectory database, billboard-to-trajectory influence
probabilities, a zone partition of the city, per-tag per-zone influence
demands, the slot/tag cost matrix, and the advertiser budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Billboard:
    id: int
    lat: float
    lon: float
    zone_id: int


@dataclass(frozen=True)
class Slot:
    """One fixed-duration display interval on one billboard; ticks are integers."""

    id: int
    billboard_id: int
    start: int
    end: int

    @property
    def duration(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class Trajectory:
    id: int
    points: tuple[tuple[float, float, int], ...]  # (lat, lon, tick), time-sorted


@dataclass(frozen=True)
class ZoneBox:
    """Axis-aligned lat/lon box.  Containment is half-open so that boxes
    sharing an edge stay disjoint."""

    id: int
    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    def contains(self, lat: float, lon: float) -> bool:
        return (self.lat_min <= lat < self.lat_max
                and self.lon_min <= lon < self.lon_max)


@dataclass(frozen=True)
class ZoneMap:
    zones: tuple[ZoneBox, ...]

    def __len__(self) -> int:
        return len(self.zones)

    def zone_of(self, lat: float, lon: float) -> int | None:
        for z in self.zones:
            if z.contains(lat, lon):
                return z.id
        return None


class ProbabilityMatrix:
    """Sparse billboard x trajectory influence probabilities; absent means 0."""

    def __init__(self, entries: dict[tuple[int, int], float]):
        self._entries = dict(entries)

    @property
    def entries(self) -> dict[tuple[int, int], float]:
        return dict(self._entries)

    def get(self, billboard_id: int, trajectory_id: int) -> float:
        return self._entries.get((billboard_id, trajectory_id), 0.0)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, ProbabilityMatrix) and self._entries == other._entries


class DemandMatrix:
    """Per-tag, per-zone influence demand.  Row order follows the instance's
    tag list; columns are zone ids 0..l-1."""

    def __init__(self, rows: list[list[float]] | tuple[tuple[float, ...], ...]):
        self._rows = tuple(tuple(float(v) for v in row) for row in rows)

    @property
    def rows(self) -> tuple[tuple[float, ...], ...]:
        return self._rows

    @property
    def num_tags(self) -> int:
        return len(self._rows)

    @property
    def num_zones(self) -> int:
        return len(self._rows[0]) if self._rows else 0

    def demand(self, tag_index: int, zone_id: int) -> float:
        return self._rows[tag_index][zone_id]

    def demanded_zones(self, tag_index: int) -> tuple[int, ...]:
        return tuple(z for z, v in enumerate(self._rows[tag_index]) if v > 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, DemandMatrix) and self._rows == other._rows


class CostMatrix:
    """Cost of assigning tag j to slot i.  Row order follows the instance's
    slot list, column order its tag list."""

    def __init__(self, rows: list[list[int]] | tuple[tuple[int, ...], ...]):
        self._rows = tuple(tuple(int(v) for v in row) for row in rows)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def cost(self, slot_index: int, tag_index: int) -> int:
        return self._rows[slot_index][tag_index]

    def __eq__(self, other) -> bool:
        return isinstance(other, CostMatrix) and self._rows == other._rows


class Instance:
    """Full problem input plus derived index maps.

    Treated as immutable: nothing mutates an Instance after ``__init__``.
    """

    def __init__(self, billboards, slots, trajectories, probabilities: ProbabilityMatrix,
                 zone_map: ZoneMap, tags, demands: DemandMatrix, costs: CostMatrix,
                 budget: int):
        self.billboards: tuple[Billboard, ...] = tuple(billboards)
        self.slots: tuple[Slot, ...] = tuple(slots)
        self.trajectories: tuple[Trajectory, ...] = tuple(trajectories)
        self.probabilities = probabilities
        self.zone_map = zone_map
        self.tags: tuple[int, ...] = tuple(tags)
        self.demands = demands
        self.costs = costs
        self.budget = int(budget)

        self._bb_by_id = {b.id: b for b in self.billboards}
        self._slot_by_id = {s.id: s for s in self.slots}
        self._slot_index = {s.id: i for i, s in enumerate(self.slots)}
        self._tag_index = {t: i for i, t in enumerate(self.tags)}
        zone_slots: dict[int, list[int]] = {z.id: [] for z in zone_map.zones}
        for s in self.slots:
            b = self._bb_by_id.get(s.billboard_id)
            if b is not None and b.zone_id in zone_slots:
                zone_slots[b.zone_id].append(s.id)
        self._zone_slots = {z: tuple(ids) for z, ids in zone_slots.items()}

    # --- lookups -------------------------------------------------------

    def billboard(self, billboard_id: int) -> Billboard:
        return self._bb_by_id[billboard_id]

    def slot(self, slot_id: int) -> Slot:
        return self._slot_by_id[slot_id]

    def has_slot(self, slot_id: int) -> bool:
        return slot_id in self._slot_by_id

    def slot_index(self, slot_id: int) -> int:
        return self._slot_index[slot_id]

    def tag_index(self, tag_id: int) -> int:
        return self._tag_index[tag_id]

    def billboard_of_slot(self, slot_id: int) -> Billboard:
        return self._bb_by_id[self._slot_by_id[slot_id].billboard_id]

    def cost(self, slot_id: int, tag_id: int) -> int:
        return self.costs.cost(self._slot_index[slot_id], self._tag_index[tag_id])

    def demand(self, tag_id: int, zone_id: int) -> float:
        return self.demands.demand(self._tag_index[tag_id], zone_id)

    def demanded_zones(self, tag_id: int) -> tuple[int, ...]:
        return self.demands.demanded_zones(self._tag_index[tag_id])

    def zone_slot_ids(self, zone_id: int) -> tuple[int, ...]:
        if zone_id not in self._zone_slots:
            raise KeyError(f"unknown zone id {zone_id}")
        return self._zone_slots[zone_id]


@dataclass(frozen=True)
class Allocation:
    """Assignment of tags to pairwise-disjoint slot sets, with handled flags."""

    assignments: dict[int, frozenset[int]]  # tag_id -> slot ids
    handled: dict[int, bool]                # tag_id -> flag
    total_cost: int

    def handled_tags(self) -> tuple[int, ...]:
        return tuple(sorted(t for t, h in self.handled.items() if h))

    def handled_count(self) -> int:
        return sum(1 for h in self.handled.values() if h)

    def assigned_slots(self) -> frozenset[int]:
        out: set[int] = set()
        for s in self.assignments.values():
            out |= s
        return frozenset(out)

    @staticmethod
    def empty(tags) -> "Allocation":
        return Allocation(assignments={}, handled={t: False for t in tags}, total_cost=0)


def validate_instance(instance: Instance) -> list[str]:
    """Check every structural invariant; returns a list of violations
    (empty = valid)."""
    report: list[str] = []

    for b in instance.billboards:
        if not (-90.0 <= b.lat <= 90.0):
            report.append(f"billboard {b.id}: latitude {b.lat} out of [-90, 90]")
        if not (-180.0 <= b.lon <= 180.0):
            report.append(f"billboard {b.id}: longitude {b.lon} out of [-180, 180]")
        if not (0 <= b.zone_id < len(instance.zone_map)):
            report.append(f"billboard {b.id}: zone id {b.zone_id} out of range")
        else:
            actual = instance.zone_map.zone_of(b.lat, b.lon)
            if actual != b.zone_id:
                report.append(
                    f"billboard {b.id}: location not contained in zone {b.zone_id}"
                    f" (containment gives {actual})")

    # Slot tiling: per billboard, equal-length disjoint intervals tiling the
    # shared horizon.
    if instance.slots:
        t1 = min(s.start for s in instance.slots)
        t2 = max(s.end for s in instance.slots)
        durations = {s.duration for s in instance.slots}
        if len(durations) > 1:
            report.append(f"slots have mixed durations {sorted(durations)}")
        by_bb: dict[int, list[Slot]] = {}
        for s in instance.slots:
            if s.billboard_id not in instance._bb_by_id:
                report.append(f"slot {s.id}: unknown billboard {s.billboard_id}")
                continue
            by_bb.setdefault(s.billboard_id, []).append(s)
        for bb_id, ss in by_bb.items():
            ss.sort(key=lambda s: s.start)
            cursor = t1
            ok = True
            for s in ss:
                if s.start != cursor:
                    ok = False
                    break
                cursor = s.end
            if not ok or cursor != t2:
                report.append(
                    f"billboard {bb_id}: slot intervals do not tile [{t1}, {t2}]"
                    " disjointly")

    for t in instance.trajectories:
        if not t.points:
            report.append(f"trajectory {t.id}: empty")
            continue
        ticks = [p[2] for p in t.points]
        if any(b < a for a, b in zip(ticks, ticks[1:])):
            report.append(f"trajectory {t.id}: timestamps not non-decreasing")

    bb_ids = set(instance._bb_by_id)
    traj_ids = {t.id for t in instance.trajectories}
    for (bid, tid), p in instance.probabilities.entries.items():
        if not (0.0 < p <= 1.0):
            report.append(f"probability ({bid}, {tid}) = {p} outside (0, 1]")
        if bid not in bb_ids or tid not in traj_ids:
            report.append(f"probability entry ({bid}, {tid}) references unknown ids")

    if instance.demands.num_tags != len(instance.tags):
        report.append("demand matrix row count does not match tag count")
    else:
        for i, tag in enumerate(instance.tags):
            row = instance.demands.rows[i]
            if any(not math.isfinite(v) or v < 0 for v in row):
                report.append(f"tag {tag}: demand row has negative or non-finite value")
            elif not any(v > 0 for v in row):
                report.append(f"tag {tag}: no demanded zone (all-zero demand row)")

    for i, row in enumerate(instance.costs.rows):
        if any(c < 0 for c in row):
            report.append(f"slot index {i}: negative cost")
    if len(instance.costs.rows) != len(instance.slots):
        report.append("cost matrix row count does not match slot count")

    if instance.budget < 0:
        report.append(f"budget {instance.budget} negative")

    return report


def allocation_invariant_report(instance: Instance, allocation: Allocation) -> list[str]:
    """Structural checks on an allocation: disjoint slot sets and a total
    cost that matches the recomputed sum."""
    report: list[str] = []
    seen: dict[int, int] = {}
    total = 0
    for tag, slot_ids in allocation.assignments.items():
        for sid in slot_ids:
            if sid in seen:
                report.append(f"slot {sid} assigned to tags {seen[sid]} and {tag}")
            seen[sid] = tag
            total += instance.cost(sid, tag)
    if total != allocation.total_cost:
        report.append(f"total_cost {allocation.total_cost} != recomputed {total}")
    return report
