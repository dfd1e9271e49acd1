import pytest
from hypothesis import given, strategies as st

from conftest import build_instance
from tagalloc.model import (Allocation, Billboard, Slot,
                            allocation_invariant_report, validate_instance)
from tagalloc.scenario import enumerate_slots


def test_well_formed_instance_validates():
    inst = build_instance(bb_zones=(0, 0), prob_entries={(0, 0): 0.5}, budget=5)
    assert validate_instance(inst) == []


def test_overlapping_slots_flagged():
    inst = build_instance(bb_zones=(0,), slots_per_bb=2)
    bad_slots = [Slot(id=0, billboard_id=0, start=0, end=1),
                 Slot(id=1, billboard_id=0, start=0, end=1)]
    from tagalloc.model import Instance
    broken = Instance(inst.billboards, bad_slots, inst.trajectories,
                      inst.probabilities, inst.zone_map, inst.tags,
                      inst.demands, inst.costs, inst.budget)
    report = validate_instance(broken)
    assert any("billboard 0" in line and "tile" in line for line in report)


def test_all_zero_demand_row_flagged():
    inst = build_instance(demand_rows=[[0.0]])
    report = validate_instance(inst)
    assert len(report) == 1
    assert "no demanded zone" in report[0]


def test_billboard_outside_zone_flagged():
    inst = build_instance()
    bad = [Billboard(id=0, lat=50.0, lon=0.5, zone_id=0)]
    from tagalloc.model import Instance
    broken = Instance(bad, inst.slots, inst.trajectories, inst.probabilities,
                      inst.zone_map, inst.tags, inst.demands, inst.costs, 0)
    assert any("not contained" in line for line in validate_instance(broken))


def test_bad_probability_flagged():
    inst = build_instance(prob_entries={(0, 0): 1.5})
    assert any("outside (0, 1]" in line for line in validate_instance(inst))


@given(n=st.integers(1, 20), periods=st.integers(1, 12), delta=st.integers(1, 10))
def test_slot_enumeration_count(n, periods, delta):
    billboards = [Billboard(id=i, lat=0.5, lon=0.5, zone_id=0) for i in range(n)]
    t1, t2 = 0, periods * delta
    slots = enumerate_slots(billboards, t1, t2, delta)
    assert len(slots) == ((t2 - t1) // delta) * n
    assert len({s.id for s in slots}) == len(slots)


def test_enumerate_rejects_non_divisible_horizon():
    billboards = [Billboard(id=0, lat=0.5, lon=0.5, zone_id=0)]
    with pytest.raises(ValueError):
        enumerate_slots(billboards, 0, 5, 2)


def test_allocation_invariants_checked():
    inst = build_instance(bb_zones=(0, 0), n_tags=2,
                          cost_rows=[[3, 3], [4, 4]],
                          demand_rows=[[1.0], [1.0]])
    good = Allocation(assignments={0: frozenset({0}), 1: frozenset({1})},
                      handled={0: True, 1: True}, total_cost=7)
    assert allocation_invariant_report(inst, good) == []

    shared = Allocation(assignments={0: frozenset({0}), 1: frozenset({0})},
                        handled={0: True, 1: True}, total_cost=6)
    assert any("assigned to tags" in line
               for line in allocation_invariant_report(inst, shared))

    wrong_total = Allocation(assignments={0: frozenset({0})},
                             handled={0: True, 1: False}, total_cost=99)
    assert any("recomputed" in line
               for line in allocation_invariant_report(inst, wrong_total))
