"""Incremental replanning on a grid.

Watch the planner repair its distance estimates after hidden costs are
revealed, instead of searching from scratch: the number of vertex
expansions per replanning step collapses once the first search is done.
"""

import random

from scoutplan import KnowledgeState, PlanningCostView, bench, dstar
from scoutplan.dstar import CostUpdate

inst, real = bench.generate_grid(bench.GridSpec(rows=10, cols=20, n_impeded_cuts=8), seed=7)
view = PlanningCostView(inst, KnowledgeState())

state = dstar.initialize(inst, view, inst.p, inst.d)
path = dstar.replan(state, view, inst.p, [])
print(f"grid with {inst.n_vertices} vertices, {len(inst.impeded_ids)} impeded edges")
print(f"initial search: {state.expansions} expansions, route cost {path.cost:.1f}")

rng = random.Random(0)
pos = inst.p
hidden = sorted(inst.impeded_ids)
rng.shuffle(hidden)

step = 0
while hidden and pos != inst.d:
    # Advance a few vertices along the current route, then learn one cost.
    hops = min(3, len(path.vertices) - 1)
    pos = path.vertices[hops]
    eid = hidden.pop()
    old = view.cost(eid)
    view.knowledge.reveal(eid, real[eid])
    before = state.expansions
    path = dstar.replan(state, view, pos, [CostUpdate(eid, old, view.cost(eid))])
    step += 1
    print(
        f"step {step}: revealed edge {eid} at {real[eid]:.1f} (expected {old:.1f}); "
        f"repaired with {state.expansions - before} expansions, "
        f"cost to go {path.cost:.1f}"
    )
