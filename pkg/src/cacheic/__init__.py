"""Power-cost planning for a two-cell cache-aided interference network."""

from .allocators import (AllocationResult, exhaustive_search, low_complexity,
                         top_popularity, top_rate)
from .dispatch import (CostEvaluator, ExpectedCost, Mode, SolverConfig,
                       expected_cost, request_cost, select_strategy_ca,
                       select_strategy_nc)
from .hk import (HkGranularity, HkPoint, HkSolveResult, cost_hk,
                 decoupled_floor, hk_achievable, region_rates, solve_hk)
from .mimo import MimoSolveReport, cost_mimo_bc, mimo_link_cost
from .model import (CacheAllocation, ChannelState, Demand, FileCatalog,
                    LinkCost, Strategy, capacity, from_db, order_by_gain,
                    snr_for_rate, to_db, to_standard_form)
from .scenario import (FadingConfig, MaxPowerPolicy, ScenarioConfig, SweepRow,
                       calibrate_pmax, monte_carlo_q, sample_channel,
                       static_channel, sweep)
from .solvers import (cost_broadcast, cost_gic, cost_gin, cost_miso,
                      cost_multicast, cost_orthogonal, gin_alpha)

__version__ = "0.1.0"

__all__ = [
    "AllocationResult", "CacheAllocation", "ChannelState", "CostEvaluator",
    "Demand", "ExpectedCost", "FadingConfig", "FileCatalog", "HkGranularity",
    "HkPoint", "HkSolveResult", "LinkCost", "MaxPowerPolicy",
    "MimoSolveReport", "Mode", "ScenarioConfig", "SolverConfig", "Strategy",
    "SweepRow", "calibrate_pmax", "capacity", "cost_broadcast", "cost_gic",
    "cost_gin", "cost_hk", "cost_mimo_bc", "cost_miso", "cost_multicast",
    "cost_orthogonal", "decoupled_floor", "exhaustive_search", "expected_cost",
    "from_db", "gin_alpha", "hk_achievable", "low_complexity",
    "mimo_link_cost", "monte_carlo_q", "order_by_gain", "region_rates",
    "request_cost", "sample_channel", "select_strategy_ca",
    "select_strategy_nc", "snr_for_rate", "solve_hk", "static_channel",
    "sweep", "to_db", "to_standard_form", "top_popularity", "top_rate",
    "__version__",
]
