"""Continuous-time co-simulation of the ground vehicle and the scout.

Both vehicles start at t=0.  The ground vehicle follows its current best
path and never pauses; entering an impeded edge whose cost is still hidden
commits it to the true cost, revealed on arrival.  The scout flies its
inspection plan and reveals an edge when it finishes crossing it.  Every
revelation triggers replanning for both vehicles, effective at each
vehicle's next vertex; mid-edge commitments are always honored.  Planning
wall time is measured but never consumes simulated time.
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass, field

from . import dstar, kspp, paa, rpp
from .core import (
    INF,
    KnowledgeState,
    NoPathError,
    PlanningCostView,
    ProblemInstance,
    Realization,
    UavMetric,
    dijkstra,
)
from .dstar import CostUpdate
from .paa import PaaContext, PriorityWeights
from .rpp import CriticalEdge, UavLeg

PLANNERS = ("rpp", "paa", "naive")


@dataclass
class SimulationConfig:
    planner: str = "rpp"
    k: int = 3
    weights: PriorityWeights = field(default_factory=PriorityWeights)
    rpp_budget_s: float = 1.0
    rng_seed: int = 0
    uav_enabled: bool = True

    def __post_init__(self):
        if self.planner not in PLANNERS:
            raise ValueError(f"unknown planner {self.planner!r}")
        if self.k < 1:
            raise ValueError("k must be at least 1")


@dataclass(frozen=True)
class Event:
    time: float
    kind: str  # "reveal" | "ugv_arrives" | "uav_arrives"
    data: tuple


def format_event(ev: Event) -> str:
    if ev.kind == "reveal":
        eid, cost, by = ev.data
        return f"t={ev.time!r} reveal edge={eid} cost={cost!r} by={by}"
    (v,) = ev.data
    return f"t={ev.time!r} {ev.kind} v={v}"


@dataclass
class ReplanRecord:
    trigger: str
    ugv_seconds: float = 0.0
    uav_seconds: float = 0.0
    uav_solver_seconds: float = 0.0
    budget_hit: bool = False


@dataclass
class SimulationOutcome:
    arrival_time: float
    events: list[Event]
    replans: list[ReplanRecord]
    lower_bound: float
    late_inspections: int = 0

    @property
    def n_replans(self) -> int:
        return len(self.replans)

    @property
    def max_ugv_replan_s(self) -> float:
        return max((r.ugv_seconds for r in self.replans), default=0.0)

    @property
    def max_uav_replan_s(self) -> float:
        return max((r.uav_seconds for r in self.replans), default=0.0)

    @property
    def max_uav_solver_s(self) -> float:
        return max((r.uav_solver_seconds for r in self.replans), default=0.0)

    @property
    def budget_hits(self) -> int:
        return sum(1 for r in self.replans if r.budget_hit)

    def event_log_text(self) -> str:
        return "\n".join(format_event(ev) for ev in self.events) + "\n"


def lower_bound(inst: ProblemInstance, realization: Realization) -> float:
    """Perfect-information shortest arrival: every hidden cost known upfront."""
    edges = inst.edges

    def cost(eid: int) -> float:
        rec = edges[eid]
        return realization[eid] if rec.impeded else rec.ugv_cost

    dist, _ = dijkstra(inst, inst.p, cost)
    if dist[inst.d] == INF:
        raise NoPathError("destination unreachable")
    return dist[inst.d]


def naive_step(
    inst: ProblemInstance,
    view: PlanningCostView,
    metric: UavMetric,
    critical: list[CriticalEdge],
    path_set: kspp.PathSet,
    uav_pos: int,
    uav_time: float,
) -> tuple[int, int] | None:
    """Nearest on-path inspection the scout can finish inside its window.

    Returns (edge id, starting endpoint) or None when nothing is feasible.
    """
    best = path_set.best()
    if best is None or not critical:
        return None
    windows = {ce.edge: ce.t_max for ce in critical}
    for a, b in zip(best.vertices, best.vertices[1:]):
        eid = inst.ugv_edge_between(a, b)
        t_max = windows.get(eid)
        if t_max is None:
            continue
        rec = inst.edges[eid]
        cu = uav_time + metric.cost(uav_pos, rec.u) + rec.uav_cost
        cv = uav_time + metric.cost(uav_pos, rec.v) + rec.uav_cost
        completion, start = (cu, rec.u) if cu <= cv else (cv, rec.v)
        if completion <= t_max:
            return (eid, start)
    return None


class _Engine:
    def __init__(self, inst: ProblemInstance, realization: Realization, cfg: SimulationConfig):
        self.inst = inst
        self.real = realization
        self.cfg = cfg
        self.k_eff = 1 if cfg.planner == "naive" else cfg.k
        self.knowledge = KnowledgeState()
        self.view = PlanningCostView(inst, self.knowledge)
        self.metric = UavMetric(inst)
        self.dstate = dstar.initialize(inst, self.view, inst.p, inst.d)
        self.events: list[Event] = []
        self.replans: list[ReplanRecord] = []
        self.late = 0
        self.now = 0.0
        # Ground vehicle: either parked at a vertex or committed to an edge.
        self.ugv_at: int | None = inst.p
        self.route: list[int] = []
        self.route_pos = 0
        self.ugv_to = inst.p
        self.ugv_edge = -1
        self.ugv_arrival = 0.0
        self.pending_route: tuple[int, list[int]] | None = None
        # Scout.
        self.uav_at: int | None = inst.q
        self.uav_cur: UavLeg | None = None
        self.uav_arrival = INF
        self.uav_legs: list[UavLeg] = []
        self.uav_pending: tuple[int, list[UavLeg]] | None = None
        # Current plan context for inspection windows.
        self.pset = kspp.PathSet()
        self.plan_origin_time = 0.0

    # -- planning ---------------------------------------------------------

    def _ugv_origin(self) -> tuple[int, float]:
        if self.ugv_at is not None:
            return self.ugv_at, self.now
        return self.ugv_to, self.ugv_arrival

    def _uav_origin(self) -> tuple[int, float]:
        if self.uav_at is not None:
            return self.uav_at, self.now
        return self.uav_cur.to, self.uav_arrival

    def _replan_both(self, trigger: str, updates: list[CostUpdate]) -> None:
        rec = ReplanRecord(trigger)
        origin, origin_time = self._ugv_origin()
        t0 = _time.perf_counter()
        pset = kspp.update_k_paths(self.inst, self.view, self.dstate, origin, updates, self.k_eff)
        rec.ugv_seconds = _time.perf_counter() - t0
        if not pset.paths:
            raise NoPathError(f"no route from {origin} to {self.inst.d}")
        self.pset = pset
        self.plan_origin_time = origin_time
        new_route = list(pset.paths[0].vertices)
        if self.ugv_at == origin:
            self.route = new_route
            self.route_pos = 0
            self.pending_route = None
        else:
            self.pending_route = (origin, new_route)
        self._replan_uav(rec)
        self.replans.append(rec)

    def _replan_uav(self, rec: ReplanRecord) -> None:
        if not self.cfg.uav_enabled:
            return
        origin, origin_time = self._uav_origin()
        t0 = _time.perf_counter()
        exclude: tuple[int, ...] = ()
        if self.ugv_at is None and self.inst.edges[self.ugv_edge].impeded and not self.knowledge.knows(self.ugv_edge):
            exclude = (self.ugv_edge,)
        critical = rpp.extract_critical_edges(
            self.pset, self.knowledge, self.inst, self.view,
            start_time=self.plan_origin_time, exclude=exclude,
        )
        legs: list[UavLeg] = []
        solver_s = 0.0
        if critical:
            cfg = self.cfg
            if cfg.planner == "rpp":
                graph = rpp.build_transformed_graph(self.inst, critical, origin, origin_time, self.metric)
                s0 = _time.perf_counter()
                sol = rpp.rpp_dfs(graph, cfg.rpp_budget_s)
                solver_s = _time.perf_counter() - s0
                rec.budget_hit = rec.budget_hit or sol.budget_exhausted
                legs = rpp.solution_to_uav_plan(graph, sol, self.inst, origin, self.metric)
            elif cfg.planner == "paa":
                ctx = PaaContext(
                    self.inst, self.view, self.pset, origin, cfg.weights, cfg.k, self.metric
                )
                s0 = _time.perf_counter()
                chosen = paa.select_edge(critical, ctx)
                solver_s = _time.perf_counter() - s0
                if chosen is not None:
                    rec2 = self.inst.edges[chosen]
                    du = self.metric.cost(origin, rec2.u)
                    dv = self.metric.cost(origin, rec2.v)
                    start = rec2.u if du <= dv else rec2.v
                    legs = rpp.edge_inspection_legs(self.inst, self.metric, origin, chosen, start)
            else:
                s0 = _time.perf_counter()
                chosen = naive_step(
                    self.inst, self.view, self.metric, critical, self.pset, origin, origin_time
                )
                solver_s = _time.perf_counter() - s0
                if chosen is not None:
                    legs = rpp.edge_inspection_legs(self.inst, self.metric, origin, chosen[0], chosen[1])
        rec.uav_seconds += _time.perf_counter() - t0
        rec.uav_solver_seconds = max(rec.uav_solver_seconds, solver_s)
        if self.uav_at == origin:
            self.uav_legs = legs
            self.uav_pending = None
        else:
            self.uav_pending = (origin, legs)

    # -- movement ---------------------------------------------------------

    def _ugv_depart(self) -> None:
        v = self.ugv_at
        nxt = self.route[self.route_pos + 1]
        eid = self.inst.ugv_edge_between(v, nxt)
        rec = self.inst.edges[eid]
        dur = self.real[eid] if rec.impeded else rec.ugv_cost
        self.ugv_at = None
        self.ugv_edge = eid
        self.ugv_to = nxt
        self.ugv_arrival = self.now + dur
        if rec.impeded and not self.knowledge.knows(eid):
            self._cancel_uav_if_targeting(eid)

    def _cancel_uav_if_targeting(self, eid: int) -> None:
        if not self.cfg.uav_enabled:
            return
        queued = any(leg.edge == eid for leg in self.uav_legs)
        if self.uav_pending is not None:
            queued = queued or any(leg.edge == eid for leg in self.uav_pending[1])
        if not queued:
            return
        rec = ReplanRecord(f"cancel:{eid}")
        self._replan_uav(rec)
        self.replans.append(rec)
        self._uav_depart_if_idle()

    def _uav_depart_if_idle(self) -> None:
        if self.uav_at is not None and self.uav_cur is None and self.uav_legs:
            leg = self.uav_legs.pop(0)
            self.uav_cur = leg
            self.uav_arrival = self.now + leg.duration
            self.uav_at = None

    # -- event processing -------------------------------------------------

    def _log(self, kind: str, data: tuple) -> None:
        self.events.append(Event(self.now, kind, data))

    def _reveal(self, eid: int, by: str) -> None:
        true = self.real[eid]
        if by == "uav" and self.ugv_at is None and self.ugv_edge == eid:
            self.late += 1
        self._log("reveal", (eid, true, by))
        old = self.view.cost(eid)
        self.knowledge.reveal(eid, true)
        self._replan_both(f"reveal:{eid}", [CostUpdate(eid, old, true)])

    def _process_uav_arrival(self) -> None:
        leg = self.uav_cur
        self.now = self.uav_arrival
        w = leg.to
        self.uav_at = w
        self.uav_cur = None
        self.uav_arrival = INF
        if leg.inspect and not self.knowledge.knows(leg.edge):
            self._reveal(leg.edge, "uav")
        self._log("uav_arrives", (w,))
        if self.uav_pending is not None and self.uav_pending[0] == w:
            self.uav_legs = self.uav_pending[1]
            self.uav_pending = None
        self._uav_depart_if_idle()

    def _process_ugv_arrival(self) -> bool:
        self.now = self.ugv_arrival
        v = self.ugv_to
        eid = self.ugv_edge
        self.ugv_at = v
        if self.inst.edges[eid].impeded and not self.knowledge.knows(eid):
            self._reveal(eid, "ugv")
        self._log("ugv_arrives", (v,))
        if v == self.inst.d:
            return True
        if self.pending_route is not None and self.pending_route[0] == v:
            self.route = self.pending_route[1]
            self.route_pos = 0
            self.pending_route = None
        if self.route[self.route_pos] != v:
            self.route_pos += 1
        self._ugv_depart()
        self._uav_depart_if_idle()
        return False

    def run(self) -> SimulationOutcome:
        lb = lower_bound(self.inst, self.real)
        self._replan_both("init", [])
        if self.inst.p == self.inst.d:
            self._log("ugv_arrives", (self.inst.p,))
            return SimulationOutcome(0.0, self.events, self.replans, lb, self.late)
        self._ugv_depart()
        self._uav_depart_if_idle()
        while True:
            if self.uav_cur is not None and self.uav_arrival <= self.ugv_arrival:
                self._process_uav_arrival()
            else:
                if self._process_ugv_arrival():
                    break
        return SimulationOutcome(self.now, self.events, self.replans, lb, self.late)


def run(
    inst: ProblemInstance, realization: Realization, config: SimulationConfig
) -> SimulationOutcome:
    """Simulate one mission and return its outcome."""
    return _Engine(inst, realization, config).run()
