"""Choosing what the scout should inspect.

From the ground vehicle's candidate routes we collect the critical edges
(unrealized impeded edges on any route, deadline-stamped when they sit on
the best route), then compare the two scout planners: the optimal
inspection tour and the linear-time priority pick.
"""

from scoutplan import (
    KnowledgeState,
    PaaContext,
    PlanningCostView,
    PriorityWeights,
    bench,
    dstar,
    kspp,
    paa,
    rpp,
)

inst, real = bench.generate_bridge(bench.BridgeSpec(n_paths=5, chain_len=12), seed=11)
view = PlanningCostView(inst, KnowledgeState())
state = dstar.initialize(inst, view, inst.p, inst.d)
pset = kspp.update_k_paths(inst, view, state, inst.p, [], 4)

critical = rpp.extract_critical_edges(pset, view.knowledge, inst, view)
print(f"{len(critical)} critical edges from {len(pset)} routes:")
for ce in critical:
    rec = inst.edges[ce.edge]
    window = "no deadline" if ce.t_max == float("inf") else f"finish by t={ce.t_max:.1f}"
    print(f"  edge {ce.edge} ({rec.u}-{rec.v}), {window}")

graph = rpp.build_transformed_graph(inst, critical, uav_pos=inst.q)
sol = rpp.rpp_dfs(graph)
legs = rpp.solution_to_uav_plan(graph, sol, inst, inst.q)
print(f"\ntour solver: inspects {sol.inspected} edges, tour cost {sol.best_cost:.1f}")
for leg in legs:
    action = f"inspect edge {leg.edge}" if leg.inspect else "fly"
    print(f"  {leg.frm} -> {leg.to}  {action}  ({leg.duration:.1f})")

ctx = PaaContext(inst, view, pset, inst.q, PriorityWeights(), 4)
scored = sorted(paa.score_edges(critical, ctx), key=lambda e: -e.score)
print("\npriority planner ranking:")
for ep in scored:
    print(
        f"  edge {ep.edge}: score {ep.score:.3f} "
        f"(coverage {ep.p1:.2f}, urgency {ep.p2:.2f}, "
        f"uncertainty {ep.p3:.2f}, proximity {ep.p4:.2f})"
    )
print(f"selected: edge {paa.select_edge(critical, ctx)}")
