"""Budgeted assignment of advertiser tags to billboard slots under
per-zone influence demands."""

from .baselines import random_assign, topk_assign
from .greedy import SolverConfig, TagCandidate, allocation_cost, build_candidate, \
    ceg_assign, min_cost_zone_cover
from .influence import CoverageState, InfluenceModel, build_probability_matrix, \
    haversine_m, influence, influence_prob, open_coverage, zonal_influence
from .model import (Allocation, Billboard, CostMatrix, DemandMatrix, Instance,
                    ProbabilityMatrix, Slot, Trajectory, ZoneBox, ZoneMap,
                    validate_instance)
from .oracle import OracleLimits, OracleResult, exact_optimal, verify_allocation
from .scenario import (ScenarioParams, SupplySummary, enumerate_slots, gen_budget,
                       gen_costs, gen_demands, gen_synthetic, ingest_billboards,
                       ingest_checkins, load_instance, save_instance,
                       supply_summary)
from .sweep import (MetricsRecord, SweepConfig, bench_scaling, emit_report,
                    run_sweep)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
