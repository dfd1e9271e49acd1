"""Instance construction: CSV ingestion of billboards and check-ins,
synthetic city generation, and the cost / demand / budget models.

Costs are proportional to slot influence, cost(bs) = floor(beta * I(bs) / 10)
with beta drawn per slot.  Tag demands start from floor(omega * supply *
delta) per tag, are split across a random supply-weighted subset of zones,
and are then rescaled globally so the realized demand/supply ratio equals
theta exactly.  The budget is the sum of per-tag payments
floor(alpha * sigma_i).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .influence import InfluenceModel, build_probability_matrix
from .model import (Allocation, Billboard, CostMatrix, DemandMatrix, Instance,
                    ProbabilityMatrix, Slot, Trajectory, ZoneBox, ZoneMap,
                    validate_instance)

log = logging.getLogger(__name__)

SNAPSHOT_FORMAT = "tagalloc-instance"
SNAPSHOT_VERSION = 1


class IngestError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioParams:
    """Knobs of the synthetic generator; defaults follow the benchmark's
    standard setting (theta 100%, delta 5%, lambda 100 m)."""

    theta: float = 1.0
    delta: float = 0.05
    tag_count: int = 20
    lam: float = 100.0
    omega_range: tuple[float, float] = (0.8, 1.2)
    beta_range: tuple[float, float] = (0.8, 1.1)
    alpha_range: tuple[float, float] = (0.9, 1.1)
    zone_count: int = 3
    horizon: tuple[int, int, int] = (0, 4, 2)  # (T1, T2, tick duration)
    seed: int = 0
    billboard_count: int = 12
    trajectory_count: int = 60
    influence_kind: str = "indicator"

    def __post_init__(self):
        if self.theta <= 0 or self.delta <= 0:
            raise ValueError("theta and delta must be positive")
        if self.zone_count < 1 or self.tag_count < 1:
            raise ValueError("zone_count and tag_count must be >= 1")


@dataclass(frozen=True)
class SupplySummary:
    sigma_star: float                 # total supply: sum of single-slot influences
    per_zone: tuple[float, ...]       # supply per zone id
    sigma_total_demand: float | None = None  # global demand, once known


# --- ingestion ---------------------------------------------------------


def ingest_billboards(path, zone_map: ZoneMap) -> list[Billboard]:
    """Parse a billboard CSV (header ``id,lat,lon``); zone ids are assigned
    by box containment.  Malformed or out-of-range rows raise, naming the
    line."""
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or [c.strip() for c in lines[0].split(",")] != ["id", "lat", "lon"]:
        raise IngestError(f"{path}: expected header 'id,lat,lon'")
    out = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        try:
            bid, lat, lon = int(parts[0]), float(parts[1]), float(parts[2])
        except (ValueError, IndexError) as e:
            raise IngestError(f"{path}:{lineno}: malformed row {line!r}") from e
        if not (-90.0 <= lat <= 90.0) or not (-180.0 <= lon <= 180.0):
            raise IngestError(f"{path}:{lineno}: coordinates ({lat}, {lon})"
                              " out of range")
        zone = zone_map.zone_of(lat, lon)
        out.append(Billboard(id=bid, lat=lat, lon=lon,
                             zone_id=zone if zone is not None else -1))
    return out


def ingest_checkins(path, grouping: str = "by-user",
                    tick_seconds: int = 3600) -> list[Trajectory]:
    """Parse a check-in CSV (header ``user_id,timestamp,lat,lon``) into
    trajectories grouped by user or user+day; malformed rows are skipped
    with a logged warning."""
    if grouping not in ("by-user", "by-user-day"):
        raise ValueError(f"unknown grouping {grouping!r}")
    path = Path(path)
    lines = path.read_text().splitlines()
    expected = ["user_id", "timestamp", "lat", "lon"]
    if not lines or [c.strip() for c in lines[0].split(",")] != expected:
        raise IngestError(f"{path}: expected header 'user_id,timestamp,lat,lon'")
    groups: dict[tuple, list[tuple[float, float, int]]] = {}
    rejected: list[int] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        try:
            user, ts = int(parts[0]), int(parts[1])
            lat, lon = float(parts[2]), float(parts[3])
            if not (-90.0 <= lat <= 90.0) or not (-180.0 <= lon <= 180.0):
                raise ValueError("coordinates out of range")
        except (ValueError, IndexError):
            rejected.append(lineno)
            continue
        key = (user,) if grouping == "by-user" else (user, ts // 86400)
        groups.setdefault(key, []).append((lat, lon, ts // tick_seconds))
    if rejected:
        log.warning("%s: rejected %d malformed rows at lines %s",
                    path, len(rejected), rejected)
    out = []
    for tid, key in enumerate(sorted(groups)):
        points = sorted(groups[key], key=lambda p: p[2])
        out.append(Trajectory(id=tid, points=tuple(points)))
    return out


# --- generation --------------------------------------------------------


def enumerate_slots(billboards, t1: int, t2: int, delta: int) -> list[Slot]:
    """Tile [t1, t2] with duration-delta slots on every billboard; yields
    exactly ((t2 - t1) / delta) * n slots."""
    if delta <= 0 or (t2 - t1) % delta != 0:
        raise ValueError(f"horizon [{t1}, {t2}] not divisible by delta {delta}")
    slots = []
    sid = 0
    for b in billboards:
        for start in range(t1, t2, delta):
            slots.append(Slot(id=sid, billboard_id=b.id, start=start,
                              end=start + delta))
            sid += 1
    return slots


def slot_influences(slots, billboards, probabilities: ProbabilityMatrix,
                    trajectories) -> list[float]:
    """Individual influence of each slot: the row sum of its billboard's
    probability column."""
    by_bb: dict[int, float] = {b.id: 0.0 for b in billboards}
    for (bid, tid), p in probabilities.entries.items():
        if bid in by_bb:
            by_bb[bid] += p
    return [by_bb[s.billboard_id] for s in slots]


def supply_summary(slots, billboards, probabilities, trajectories,
                   zone_map: ZoneMap) -> SupplySummary:
    infl = slot_influences(slots, billboards, probabilities, trajectories)
    bb_zone = {b.id: b.zone_id for b in billboards}
    per_zone = [0.0] * len(zone_map)
    for s, v in zip(slots, infl):
        z = bb_zone[s.billboard_id]
        if 0 <= z < len(per_zone):
            per_zone[z] += v
    return SupplySummary(sigma_star=float(sum(infl)), per_zone=tuple(per_zone))


def gen_costs(slots, influences, num_tags: int, beta_range, seed) -> CostMatrix:
    """cost(bs) = floor(beta * I(bs) / 10), identical across tags."""
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    rows = []
    for infl in influences:
        beta = rng.uniform(*beta_range)
        c = int(np.floor(beta * infl / 10.0))
        rows.append([c] * num_tags)
    return CostMatrix(rows)


def gen_demands(params: ScenarioParams, supply: SupplySummary, seed) -> DemandMatrix:
    """Per-tag totals floor(omega * sigma* * delta), split over a random
    supply-weighted zone subset, then rescaled so global demand / supply
    equals theta exactly."""
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    sigma_star = supply.sigma_star
    n_zones = len(supply.per_zone)
    positive = [z for z in range(n_zones) if supply.per_zone[z] > 0]
    rows = []
    for _ in range(params.tag_count):
        omega = rng.uniform(*params.omega_range)
        sigma_i = float(np.floor(omega * sigma_star * params.delta))
        row = [0.0] * n_zones
        if positive:
            size = int(rng.integers(1, len(positive) + 1))
            chosen = sorted(rng.choice(positive, size=size, replace=False).tolist())
            weight = sum(supply.per_zone[z] for z in chosen)
            for z in chosen:
                row[z] = sigma_i * supply.per_zone[z] / weight
        rows.append(row)
    total = sum(sum(r) for r in rows)
    if total > 0:
        scale = params.theta * sigma_star / total
        rows = [[v * scale for v in r] for r in rows]
    return DemandMatrix(rows)


def gen_budget(demands: DemandMatrix, alpha_range, seed) -> int:
    """Sum of per-tag payments floor(alpha_i * sigma_i)."""
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    budget = 0
    for row in demands.rows:
        alpha = rng.uniform(*alpha_range)
        budget += int(np.floor(alpha * sum(row)))
    return budget


_BASE_LAT = 40.70
_BASE_LON = -74.00
_ZONE_DEG = 0.02  # ~2.2 km zone box edge


def _zone_grid(zone_count: int) -> ZoneMap:
    zones = []
    for z in range(zone_count):
        zones.append(ZoneBox(id=z,
                             lat_min=_BASE_LAT, lat_max=_BASE_LAT + _ZONE_DEG,
                             lon_min=_BASE_LON + z * _ZONE_DEG,
                             lon_max=_BASE_LON + (z + 1) * _ZONE_DEG))
    return ZoneMap(zones=tuple(zones))


def gen_synthetic(params: ScenarioParams) -> Instance:
    """Seeded synthetic city: zone boxes on a strip, billboards uniform per
    zone, trajectories as random walks anchored near billboards.  The result
    always passes validate_instance."""
    rng = np.random.default_rng(params.seed)
    zone_map = _zone_grid(params.zone_count)

    billboards = []
    margin = 0.1 * _ZONE_DEG
    for i in range(params.billboard_count):
        z = zone_map.zones[i % params.zone_count]
        lat = rng.uniform(z.lat_min + margin, z.lat_max - margin)
        lon = rng.uniform(z.lon_min + margin, z.lon_max - margin)
        billboards.append(Billboard(id=i, lat=lat, lon=lon, zone_id=z.id))

    # Walks anchored near billboards so the influence radius actually bites.
    trajectories = []
    t1, t2, delta = params.horizon
    for j in range(params.trajectory_count):
        anchor = billboards[int(rng.integers(0, len(billboards)))]
        lat, lon = anchor.lat + rng.normal(0, 5e-4), anchor.lon + rng.normal(0, 5e-4)
        n_pts = int(rng.integers(4, 12))
        tick = int(rng.integers(t1, max(t1 + 1, t2)))
        points = []
        for _ in range(n_pts):
            points.append((lat, lon, tick))
            lat += rng.normal(0, 8e-4)
            lon += rng.normal(0, 8e-4)
            tick += 1
        trajectories.append(Trajectory(id=j, points=tuple(points)))

    model = InfluenceModel(kind=params.influence_kind, lam=params.lam)
    probabilities = build_probability_matrix(billboards, trajectories, model)
    slots = enumerate_slots(billboards, t1, t2, delta)
    influences = slot_influences(slots, billboards, probabilities, trajectories)
    supply = supply_summary(slots, billboards, probabilities, trajectories, zone_map)
    if supply.sigma_star <= 0:
        raise ValueError("degenerate scenario: no billboard influences any"
                         " trajectory; increase lam or density")

    costs = gen_costs(slots, influences, params.tag_count, params.beta_range, rng)
    demands = gen_demands(params, supply, rng)
    budget = gen_budget(demands, params.alpha_range, rng)
    tags = list(range(params.tag_count))

    instance = Instance(billboards, slots, trajectories, probabilities, zone_map,
                        tags, demands, costs, budget)
    report = validate_instance(instance)
    if report:
        raise ValueError("generated instance invalid: " + "; ".join(report))
    return instance


# --- snapshot serialization -------------------------------------------


def instance_to_dict(instance: Instance) -> dict:
    return {
        "format": SNAPSHOT_FORMAT,
        "version": SNAPSHOT_VERSION,
        "billboards": [[b.id, b.lat, b.lon, b.zone_id] for b in instance.billboards],
        "slots": [[s.id, s.billboard_id, s.start, s.end] for s in instance.slots],
        "trajectories": [[t.id, [list(p) for p in t.points]]
                         for t in instance.trajectories],
        "probabilities": {f"{bid},{tid}": p for (bid, tid), p
                          in sorted(instance.probabilities.entries.items())},
        "zones": [[z.id, z.lat_min, z.lat_max, z.lon_min, z.lon_max]
                  for z in instance.zone_map.zones],
        "tags": list(instance.tags),
        "demands": [list(r) for r in instance.demands.rows],
        "costs": [list(r) for r in instance.costs.rows],
        "budget": instance.budget,
    }


def instance_from_dict(data: dict) -> Instance:
    if data.get("format") != SNAPSHOT_FORMAT:
        raise ValueError("not an instance snapshot")
    if data.get("version") != SNAPSHOT_VERSION:
        raise ValueError(f"unsupported snapshot version {data.get('version')}")
    billboards = [Billboard(*row) for row in data["billboards"]]
    slots = [Slot(*row) for row in data["slots"]]
    trajectories = [Trajectory(id=tid, points=tuple(tuple(p) for p in pts))
                    for tid, pts in data["trajectories"]]
    entries = {}
    for key, p in data["probabilities"].items():
        bid, tid = key.split(",")
        entries[(int(bid), int(tid))] = p
    zones = tuple(ZoneBox(*row) for row in data["zones"])
    return Instance(billboards, slots, trajectories, ProbabilityMatrix(entries),
                    ZoneMap(zones=zones), data["tags"], DemandMatrix(data["demands"]),
                    CostMatrix(data["costs"]), data["budget"])


def save_instance(instance: Instance, path) -> None:
    text = json.dumps(instance_to_dict(instance), sort_keys=True,
                      separators=(",", ":")) + "\n"
    Path(path).write_text(text)


def load_instance(path) -> Instance:
    return instance_from_dict(json.loads(Path(path).read_text()))


def allocation_to_dict(allocation: Allocation) -> dict:
    return {
        "format": "tagalloc-allocation",
        "version": 1,
        "assignments": {str(t): sorted(s) for t, s in allocation.assignments.items()},
        "handled": {str(t): h for t, h in allocation.handled.items()},
        "total_cost": allocation.total_cost,
    }


def allocation_from_dict(data: dict) -> Allocation:
    return Allocation(
        assignments={int(t): frozenset(s) for t, s in data["assignments"].items()},
        handled={int(t): bool(h) for t, h in data["handled"].items()},
        total_cost=int(data["total_cost"]),
    )


def save_allocation(allocation: Allocation, path) -> None:
    text = json.dumps(allocation_to_dict(allocation), sort_keys=True,
                      separators=(",", ":")) + "\n"
    Path(path).write_text(text)


def load_allocation(path) -> Allocation:
    return allocation_from_dict(json.loads(Path(path).read_text()))
