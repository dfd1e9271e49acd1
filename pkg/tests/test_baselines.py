import random
import statistics

from conftest import build_instance, random_instance
from tagalloc.baselines import random_assign, topk_assign
from tagalloc.greedy import ceg_assign
from tagalloc.influence import influence
from tagalloc.oracle import verify_allocation


def test_zero_tags_empty_allocation():
    inst = build_instance(prob_entries={(0, 0): 0.5}, n_tags=1,
                          demand_rows=[[0.4]])
    # simulate zero tags by a demand the zone trivially covers, then check
    # the genuinely empty case through an instance with no tags
    from tagalloc.model import CostMatrix, DemandMatrix, Instance
    empty = Instance(inst.billboards, inst.slots, inst.trajectories,
                     inst.probabilities, inst.zone_map, [], DemandMatrix([]),
                     CostMatrix([[] for _ in inst.slots]), 10)
    for alloc in (random_assign(empty, 0), topk_assign(empty)):
        assert alloc.handled_count() == 0 and alloc.total_cost == 0


def test_random_deterministic_per_seed():
    inst = random_instance(random.Random(8))
    assert random_assign(inst, 42) == random_assign(inst, 42)


def test_topk_deterministic():
    inst = random_instance(random.Random(8))
    assert topk_assign(inst) == topk_assign(inst)


def test_topk_picks_max_influence_slot_first():
    inst = build_instance(bb_zones=(0, 0, 0),
                          prob_entries={(0, 0): 0.3, (1, 0): 0.9, (2, 0): 0.5},
                          n_tags=1, demand_rows=[[0.8]], budget=100)
    alloc = topk_assign(inst)
    assert alloc.handled == {0: True}
    assert alloc.assignments[0] == frozenset({1})


def test_demand_beyond_zone_capacity_unhandled():
    inst = build_instance(prob_entries={(0, 0): 0.5}, n_tags=1,
                          demand_rows=[[2.0]], budget=100)
    assert topk_assign(inst).handled == {0: False}
    assert random_assign(inst, 0).handled == {0: False}


def test_both_baselines_feasible_on_random_instances():
    for seed in range(60):
        inst = random_instance(random.Random(seed))
        for alloc in (random_assign(inst, seed), topk_assign(inst)):
            assert alloc.total_cost <= inst.budget
            assert verify_allocation(inst, alloc) == []


def test_random_mean_handled_at_most_ceg():
    inst = random_instance(random.Random(77), n_bb=5, slots_per_bb=2, n_traj=8,
                           n_zones=2, n_tags=4, budget_scale=(0.4, 0.8))
    ceg = ceg_assign(inst).handled_count()
    mean_random = statistics.mean(
        random_assign(inst, s).handled_count() for s in range(100))
    assert mean_random <= ceg + 1e-9


def test_topk_cost_at_least_ceg_for_same_handled_size():
    # Statistical trend over many instances: when both methods handle the
    # same number of tags, top-influence selection pays at least as much
    # on average.
    diffs = []
    for seed in range(80):
        inst = random_instance(random.Random(3000 + seed), n_bb=5,
                               slots_per_bb=2, n_traj=8, n_zones=2, n_tags=4)
        ceg = ceg_assign(inst)
        topk = topk_assign(inst)
        if ceg.handled_count() == topk.handled_count() and ceg.handled_count() > 0:
            diffs.append(topk.total_cost - ceg.total_cost)
    assert diffs, "no comparable instances sampled"
    assert statistics.mean(diffs) >= 0
