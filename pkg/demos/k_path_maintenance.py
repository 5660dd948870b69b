"""Maintaining the k best loopless routes while costs change.

The ranked routes shift as impeded edges reveal their true costs; the
planner keeps all k of them current by repairing one shared search and
cloning it for the detour computations.
"""

import random

from scoutplan import KnowledgeState, PlanningCostView, bench, dstar, kspp
from scoutplan.dstar import CostUpdate

inst, real = bench.generate_bridge(bench.BridgeSpec(n_paths=6, chain_len=10), seed=2)
view = PlanningCostView(inst, KnowledgeState())
state = dstar.initialize(inst, view, inst.p, inst.d)

K = 4
pset = kspp.update_k_paths(inst, view, state, inst.p, [], K)
print(f"bridged instance: {inst.n_vertices} vertices, {len(inst.impeded_ids)} impeded edges")
print("initial ranking:")
for rank, path in enumerate(pset, start=1):
    print(f"  #{rank}: cost {path.cost:7.2f}, {len(path.vertices)} vertices")

rng = random.Random(5)
for eid in rng.sample(sorted(inst.impeded_ids), 4):
    old = view.cost(eid)
    view.knowledge.reveal(eid, real[eid])
    pset = kspp.update_k_paths(
        inst, view, state, inst.p, [CostUpdate(eid, old, view.cost(eid))], K
    )
    print(f"\nedge {eid}: expected {old:.1f} -> true {real[eid]:.1f}")
    for rank, path in enumerate(pset, start=1):
        print(f"  #{rank}: cost {path.cost:7.2f}, {len(path.vertices)} vertices")
