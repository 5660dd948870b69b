"""Cooperative route planning for a ground vehicle with an aerial scout.

The ground vehicle minimizes arrival time through a network whose impeded
edges have hidden travel costs; the scout inspects impeded edges ahead of
it so it can reroute early.  The package provides the incremental
k-shortest-path planner, the inspection-tour and priority planners for the
scout, a deterministic co-simulation, and benchmark generators.
"""

from .core import (
    INF,
    EdgeRecord,
    InstanceError,
    KnowledgeState,
    NoPathError,
    Path,
    PlanningCostView,
    ProblemInstance,
    Realization,
    UavMetric,
    UniformCost,
    load_instance,
    load_realization,
    planning_cost,
    sample_realization,
    save_instance,
    save_realization,
    uav_transit_cost,
)
from .dstar import CostUpdate, DStarState
from .kspp import PathSet, update_k_paths
from .paa import EdgePriority, PaaContext, PriorityWeights, select_edge
from .rpp import (
    CriticalEdge,
    RppSolution,
    TransformedGraph,
    UavLeg,
    build_transformed_graph,
    extract_critical_edges,
    rpp_dfs,
    solution_to_uav_plan,
)
from .sim import (
    Event,
    ReplanRecord,
    SimulationConfig,
    SimulationOutcome,
    lower_bound,
    run,
)

__version__ = "0.1.0"

__all__ = [
    "INF",
    "CostUpdate",
    "CriticalEdge",
    "DStarState",
    "EdgePriority",
    "EdgeRecord",
    "Event",
    "InstanceError",
    "KnowledgeState",
    "NoPathError",
    "PaaContext",
    "Path",
    "PathSet",
    "PlanningCostView",
    "PriorityWeights",
    "ProblemInstance",
    "Realization",
    "ReplanRecord",
    "RppSolution",
    "SimulationConfig",
    "SimulationOutcome",
    "TransformedGraph",
    "UavLeg",
    "UavMetric",
    "UniformCost",
    "build_transformed_graph",
    "extract_critical_edges",
    "load_instance",
    "load_realization",
    "lower_bound",
    "planning_cost",
    "rpp_dfs",
    "run",
    "sample_realization",
    "save_instance",
    "save_realization",
    "select_edge",
    "solution_to_uav_plan",
    "uav_transit_cost",
    "update_k_paths",
]
