import math
import random

import numpy as np
import pytest

from conftest import build_instance, influence_reference, zonal_influence_reference
from tagalloc.influence import (InfluenceModel, build_probability_matrix,
                                haversine_m, influence, influence_prob,
                                open_coverage, zonal_influence)
from tagalloc.model import Billboard, Trajectory


def offset_lat(meters):
    # 1 degree of latitude is ~111.2 km on the spherical model used here.
    return meters / 111194.9


class TestInfluenceProb:
    BB = Billboard(id=0, lat=40.0, lon=-74.0, zone_id=0)

    def test_point_at_billboard_indicator(self):
        t = Trajectory(id=0, points=((40.0, -74.0, 0),))
        assert influence_prob(self.BB, t, InfluenceModel(lam=100.0)) == 1.0

    def test_point_outside_radius_indicator(self):
        t = Trajectory(id=0, points=((40.0 + offset_lat(200.0), -74.0, 0),))
        assert influence_prob(self.BB, t, InfluenceModel(lam=100.0)) == 0.0

    def test_decay_near_radius(self):
        # A single point essentially at distance lam contributes exp(-d/lam),
        # i.e. ~exp(-1); expected value computed from the measured distance.
        lat = 40.0 + offset_lat(99.9)
        t = Trajectory(id=0, points=((lat, -74.0, 0),))
        model = InfluenceModel(kind="exponential-decay", lam=100.0)
        d = haversine_m(40.0, -74.0, lat, -74.0)
        assert d <= 100.0
        got = influence_prob(self.BB, t, model)
        assert got == pytest.approx(math.exp(-d / 100.0), abs=1e-12)
        assert got == pytest.approx(math.exp(-1.0), abs=1e-3)

    def test_temporal_gating_filters_points(self):
        model = InfluenceModel(lam=100.0, temporal_gating=True)
        t = Trajectory(id=0, points=((40.0, -74.0, 5),))
        assert influence_prob(self.BB, t, model, interval=(0, 3)) == 0.0
        assert influence_prob(self.BB, t, model, interval=(4, 8)) == 1.0

    def test_invalid_model_rejected(self):
        with pytest.raises(ValueError):
            InfluenceModel(kind="nope")
        with pytest.raises(ValueError):
            InfluenceModel(lam=0.0)


class TestBuildMatrix:
    def test_no_trajectories(self):
        bb = [Billboard(id=0, lat=40.0, lon=-74.0, zone_id=0)]
        assert len(build_probability_matrix(bb, [], InfluenceModel())) == 0

    def test_single_in_range_pair(self):
        bb = [Billboard(id=0, lat=40.0, lon=-74.0, zone_id=0)]
        tr = [Trajectory(id=0, points=((40.0, -74.0, 0),))]
        m = build_probability_matrix(bb, tr, InfluenceModel(lam=100.0))
        assert m.get(0, 0) == 1.0 and len(m) == 1

    def test_cells_match_pairwise_probs(self):
        rng = random.Random(7)
        bbs = [Billboard(id=i, lat=40.0 + offset_lat(rng.uniform(-300, 300)),
                         lon=-74.0, zone_id=0) for i in range(3)]
        trs = [Trajectory(id=j, points=tuple(
            (40.0 + offset_lat(rng.uniform(-300, 300)), -74.0, k)
            for k in range(4))) for j in range(2)]
        for model in (InfluenceModel(lam=150.0),
                      InfluenceModel(kind="exponential-decay", lam=150.0)):
            m = build_probability_matrix(bbs, trs, model)
            for b in bbs:
                for t in trs:
                    assert m.get(b.id, t.id) == pytest.approx(
                        influence_prob(b, t, model), abs=1e-12)


class TestInfluence:
    def make(self):
        return build_instance(
            bb_zones=(0, 0, 1),
            prob_entries={(0, 0): 0.5, (1, 0): 0.5, (2, 1): 0.3},
            n_traj=2, budget=10)

    def test_empty_set_is_zero(self):
        assert influence(set(), self.make()) == 0.0

    def test_single_slot_single_trajectory(self):
        assert influence({0}, self.make()) == pytest.approx(0.5)

    def test_two_slots_independent_product(self):
        assert influence({0, 1}, self.make()) == pytest.approx(0.75)

    def test_unknown_slot_rejected(self):
        with pytest.raises(KeyError):
            influence({99}, self.make())

    def test_matches_reference_on_random_sets(self):
        rng = random.Random(3)
        entries = {(b, t): rng.uniform(0.1, 0.9)
                   for b in range(4) for t in range(5) if rng.random() < 0.6}
        inst = build_instance(bb_zones=(0, 0, 1, 1), prob_entries=entries,
                              n_traj=5, slots_per_bb=2)
        all_ids = [s.id for s in inst.slots]
        for _ in range(50):
            subset = rng.sample(all_ids, rng.randint(0, len(all_ids)))
            assert influence(subset, inst) == pytest.approx(
                influence_reference(subset, inst), abs=1e-9)


class TestZonalInfluence:
    def make(self):
        return build_instance(
            bb_zones=(0, 0, 1),
            prob_entries={(0, 0): 0.5, (1, 0): 0.4, (2, 0): 0.3},
            n_traj=1)

    def test_set_outside_zone(self):
        assert zonal_influence({2}, 0, self.make()) == 0.0

    def test_set_inside_zone_equals_influence(self):
        inst = self.make()
        assert zonal_influence({0, 1}, 0, inst) == influence({0, 1}, inst)

    def test_mixed_set_equals_filtered_subset(self):
        inst = self.make()
        got = zonal_influence({0, 1, 2}, 0, inst)
        assert got == pytest.approx(influence_reference({0, 1}, inst), abs=1e-9)
        assert got == influence({0, 1}, inst)

    def test_unknown_zone_rejected(self):
        with pytest.raises(KeyError):
            zonal_influence({0}, 7, self.make())

    def test_zonal_never_exceeds_total(self):
        rng = random.Random(11)
        entries = {(b, t): rng.uniform(0.1, 0.9)
                   for b in range(4) for t in range(4) if rng.random() < 0.7}
        inst = build_instance(bb_zones=(0, 1, 1, 2), prob_entries=entries, n_traj=4)
        ids = [s.id for s in inst.slots]
        for _ in range(30):
            subset = rng.sample(ids, rng.randint(0, len(ids)))
            total = influence(subset, inst)
            for z in range(3):
                assert zonal_influence(subset, z, inst) <= total + 1e-12


class TestCoverageState:
    def make(self):
        rng = random.Random(5)
        entries = {(b, t): rng.uniform(0.05, 0.95)
                   for b in range(5) for t in range(6) if rng.random() < 0.6}
        return build_instance(bb_zones=(0, 0, 1, 1, 1), prob_entries=entries,
                              n_traj=6, slots_per_bb=4)

    def test_zero_probability_slot_gains_nothing(self):
        inst = build_instance(bb_zones=(0, 0), prob_entries={(0, 0): 0.5})
        state = open_coverage(inst)
        assert state.add_slot(1) == 0.0

    def test_fresh_state_single_entry(self):
        inst = build_instance(prob_entries={(0, 0): 0.5})
        state = open_coverage(inst)
        assert state.add_slot(0) == pytest.approx(0.5)
        assert state.current_influence == pytest.approx(0.5)

    def test_duplicate_add_rejected(self):
        state = open_coverage(self.make())
        state.add_slot(0)
        with pytest.raises(ValueError):
            state.add_slot(0)

    def test_incremental_matches_batch_on_random_sequences(self):
        inst = self.make()
        ids = [s.id for s in inst.slots]
        rng = random.Random(17)
        for _ in range(200):
            seq = rng.sample(ids, rng.randint(1, len(ids)))
            state = open_coverage(inst)
            for sid in seq:
                gain = state.add_slot(sid)
                assert gain >= -1e-12
            assert state.current_influence == pytest.approx(
                influence_reference(seq, inst), abs=1e-9)

    def test_monotone_and_submodular(self):
        inst = self.make()
        ids = [s.id for s in inst.slots]
        rng = random.Random(23)
        for _ in range(500):
            small = set(rng.sample(ids, rng.randint(0, len(ids) - 1)))
            extra = set(rng.sample([i for i in ids if i not in small],
                                   rng.randint(0, len(ids) - len(small))))
            big = small | extra
            assert influence(small, inst) <= influence(big, inst) + 1e-9
            free = [i for i in ids if i not in big]
            if free:
                e = rng.choice(free)
                gain_small = influence(small | {e}, inst) - influence(small, inst)
                gain_big = influence(big | {e}, inst) - influence(big, inst)
                assert gain_small >= gain_big - 1e-9

    def test_bounds(self):
        inst = self.make()
        ids = [s.id for s in inst.slots]
        assert 0.0 <= influence(ids, inst) <= len(inst.trajectories) + 1e-12


def test_haversine_known_distance():
    # One degree of latitude at the equator on a 6371 km sphere.
    assert haversine_m(0.0, 0.0, 1.0, 0.0) == pytest.approx(111194.9, rel=1e-4)
    assert haversine_m(40.0, -74.0, 40.0, -74.0) == 0.0
