"""Coverage-style influence of billboard slot sets over a trajectory database.

The influence of a slot set S is the expected number of trajectories reached
under independent per-billboard probabilities:

    sum over trajectories t of  1 - prod over slots s in S of (1 - Pr(b(s), t))

with influence of the empty set defined as 0.  Each selected slot contributes
its own (1 - Pr) factor, even when two slots share a billboard.

All batch evaluations multiply factors in ascending slot-id order and sum
with ``np.sum`` over a contiguous float64 array, so identical slot sets give
bit-identical results regardless of the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Billboard, Instance, ProbabilityMatrix, Trajectory

EARTH_RADIUS_M = 6_371_000.0


def haversine_m(lat1, lon1, lat2, lon2):
    """Great-circle distance in meters on a spherical Earth; accepts scalars
    or numpy arrays."""
    lat1, lon1, lat2, lon2 = (np.radians(np.asarray(x, dtype=float))
                              for x in (lat1, lon1, lat2, lon2))
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    a = np.sin(dlat / 2) ** 2 + np.cos(lat1) * np.cos(lat2) * np.sin(dlon / 2) ** 2
    d = 2 * EARTH_RADIUS_M * np.arcsin(np.sqrt(a))
    return float(d) if d.ndim == 0 else d


@dataclass(frozen=True)
class InfluenceModel:
    """How a billboard influences a passing trajectory.

    ``indicator``: probability 1 if any trajectory point lies within
    ``lam`` meters of the billboard, else 0.  ``exponential-decay``: each
    in-range point independently fails to influence with probability
    1 - exp(-d/lam).  With ``temporal_gating`` on, only points whose tick
    falls inside a supplied interval count.
    """

    kind: str = "indicator"
    lam: float = 100.0
    temporal_gating: bool = False

    def __post_init__(self):
        if self.kind not in ("indicator", "exponential-decay"):
            raise ValueError(f"unknown influence kind {self.kind!r}")
        if self.lam <= 0:
            raise ValueError("lam must be positive")


def influence_prob(billboard: Billboard, trajectory: Trajectory,
                   model: InfluenceModel,
                   interval: tuple[int, int] | None = None) -> float:
    """Influence probability of one billboard on one trajectory."""
    points = trajectory.points
    if model.temporal_gating and interval is not None:
        lo, hi = interval
        points = tuple(p for p in points if lo <= p[2] < hi)
    if not points:
        return 0.0
    lats = np.array([p[0] for p in points])
    lons = np.array([p[1] for p in points])
    d = haversine_m(lats, lons, billboard.lat, billboard.lon)
    d = np.atleast_1d(d)
    if model.kind == "indicator":
        return 1.0 if bool(np.any(d <= model.lam)) else 0.0
    in_range = d[d <= model.lam]
    if in_range.size == 0:
        return 0.0
    miss = np.prod(1.0 - np.exp(-in_range / model.lam))
    return float(1.0 - miss)


def build_probability_matrix(billboards, trajectories,
                             model: InfluenceModel) -> ProbabilityMatrix:
    """Materialize the sparse Pr matrix, storing only nonzero entries."""
    billboards = list(billboards)
    entries: dict[tuple[int, int], float] = {}
    if not billboards:
        return ProbabilityMatrix(entries)
    bb_lat = np.array([b.lat for b in billboards])
    bb_lon = np.array([b.lon for b in billboards])
    for t in trajectories:
        lats = np.array([p[0] for p in t.points])[:, None]
        lons = np.array([p[1] for p in t.points])[:, None]
        d = haversine_m(lats, lons, bb_lat[None, :], bb_lon[None, :])
        d = np.atleast_2d(d)  # (points, billboards)
        in_range = d <= model.lam
        if model.kind == "indicator":
            probs = np.any(in_range, axis=0).astype(float)
        else:
            miss = np.where(in_range, 1.0 - np.exp(-d / model.lam), 1.0)
            probs = 1.0 - np.prod(miss, axis=0)
        for j, b in enumerate(billboards):
            if probs[j] > 0.0:
                entries[(b.id, t.id)] = float(probs[j])
    return ProbabilityMatrix(entries)


class DenseInfluence:
    """Dense float64 view of an instance's probabilities, for fast repeated
    evaluation inside solver loops.  Row order follows the instance's slot
    list; each row is the (1 - Pr) vector of the slot's billboard."""

    def __init__(self, instance: Instance):
        self.instance = instance
        n_traj = len(instance.trajectories)
        traj_index = {t.id: j for j, t in enumerate(instance.trajectories)}
        bb_rows: dict[int, np.ndarray] = {}
        for b in instance.billboards:
            bb_rows[b.id] = np.zeros(n_traj)
        for (bid, tid), p in instance.probabilities.entries.items():
            if bid in bb_rows and tid in traj_index:
                bb_rows[bid][traj_index[tid]] = p
        # prob[i] is the Pr vector of slot i (by slot list order).
        self.prob = np.empty((len(instance.slots), n_traj))
        for i, s in enumerate(instance.slots):
            self.prob[i] = bb_rows[s.billboard_id]

    def influence_of(self, slot_ids) -> float:
        """Batch influence, multiplying factors in ascending slot-id order."""
        ids = sorted(slot_ids)
        if not ids:
            return 0.0
        residual = np.ones(self.prob.shape[1])
        for sid in ids:
            residual *= 1.0 - self.prob[self.instance.slot_index(sid)]
        return float(np.sum(1.0 - residual))


def _dense(instance: Instance) -> DenseInfluence:
    # One cached dense view per instance; instances are immutable.
    ctx = getattr(instance, "_dense_influence", None)
    if ctx is None:
        ctx = DenseInfluence(instance)
        instance._dense_influence = ctx
    return ctx


def influence(slot_set, instance: Instance) -> float:
    """Influence of a slot set over the instance's trajectory database."""
    for sid in slot_set:
        if not instance.has_slot(sid):
            raise KeyError(f"unknown slot id {sid}")
    return _dense(instance).influence_of(slot_set)


def zonal_influence(slot_set, zone_id: int, instance: Instance) -> float:
    """Influence restricted to a zone: only slots whose billboard lies in the
    zone contribute; all trajectories count."""
    in_zone = set(instance.zone_slot_ids(zone_id))  # raises on unknown zone
    subset = [sid for sid in slot_set if sid in in_zone]
    for sid in slot_set:
        if not instance.has_slot(sid):
            raise KeyError(f"unknown slot id {sid}")
    return _dense(instance).influence_of(subset)


class CoverageState:
    """Incremental residual-product state for greedy loops.

    Maintains, per trajectory, the product of (1 - Pr) over slots added so
    far; ``current_influence`` is kept equal to the sum of (1 - residual).
    """

    def __init__(self, instance: Instance):
        self.instance = instance
        self._dense = _dense(instance)
        self.residual = np.ones(len(instance.trajectories))
        self.current_influence = 0.0
        self.added: set[int] = set()

    def add_slot(self, slot_id: int) -> float:
        """Add one slot; returns the (non-negative) marginal influence gain."""
        if slot_id in self.added:
            raise ValueError(f"slot {slot_id} already added")
        if not self.instance.has_slot(slot_id):
            raise KeyError(f"unknown slot id {slot_id}")
        before = self.current_influence
        self.residual *= 1.0 - self._dense.prob[self.instance.slot_index(slot_id)]
        self.current_influence = float(np.sum(1.0 - self.residual))
        self.added.add(slot_id)
        return self.current_influence - before

    def peek_gain(self, slot_id: int) -> float:
        """Marginal gain of a slot without committing it."""
        row = self._dense.prob[self.instance.slot_index(slot_id)]
        return float(np.dot(self.residual, row))


def open_coverage(instance: Instance) -> CoverageState:
    return CoverageState(instance)
