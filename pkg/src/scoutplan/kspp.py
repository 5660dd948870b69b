"""Dynamic k-shortest path maintenance.

Yen's loopless-paths scheme driven by the incremental planner: the best
path is repaired in place after each batch of cost updates, and every spur
search runs on a throwaway clone of the search state with hidden edges
layered onto the cost view, so the shared state never sees them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import dstar
from .core import INF, NoPathError, Path, PlanningCostView, ProblemInstance
from .dstar import CostUpdate, DStarState


@dataclass
class PathSet:
    """Ranked loopless paths plus the candidate pool left behind."""

    paths: list[Path] = field(default_factory=list)
    pool: list[Path] = field(default_factory=list)

    def best(self) -> Path | None:
        return self.paths[0] if self.paths else None

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)


def yen_edge_suppression(
    inst: ProblemInstance,
    view: PlanningCostView,
    accepted: list[Path],
    root: tuple[int, ...],
) -> list[CostUpdate]:
    """Edges to hide for one spur search from the end of ``root``.

    Hides the continuation edge of every accepted path sharing the root
    prefix, plus every edge incident to an interior root vertex (all of the
    root except the spur node).  Costs go to infinity via the view overlay;
    the caller restores them after the spur search.
    """
    i = len(root)
    hidden: dict[int, float] = {}
    for path in accepted:
        vs = path.vertices
        if len(vs) > i and vs[:i] == root:
            eid = inst.ugv_edge_between(vs[i - 1], vs[i])
            if eid not in hidden:
                hidden[eid] = view.cost(eid)
    for w in root[:-1]:
        for _, eid in inst.ugv_adj[w]:
            if eid not in hidden:
                hidden[eid] = view.cost(eid)
    return [CostUpdate(eid, old, INF) for eid, old in sorted(hidden.items())]


def candidate_admission(
    pool: list[Path], accepted: list[Path], candidate: Path
) -> None:
    """Add a candidate unless its vertex sequence is already ranked or pooled.

    The pool stays sorted by (cost, vertex sequence) so selection is
    deterministic under cost ties.
    """
    seq = candidate.vertices
    for p in accepted:
        if p.vertices == seq:
            return
    for p in pool:
        if p.vertices == seq:
            return
    pool.append(candidate)
    pool.sort(key=lambda p: (p.cost, p.vertices))


def update_k_paths(
    inst: ProblemInstance,
    view: PlanningCostView,
    state: DStarState,
    v_curr: int,
    updates: list[CostUpdate],
    k: int,
) -> PathSet:
    """Refresh the k best loopless paths from v_curr after cost updates.

    The shared search state is mutated only by the rank-1 repair; spur
    searches work on clones whose key offset grows by h(v_curr, spur) so
    the inherited queue ordering stays admissible.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    try:
        best = dstar.replan(state, view, v_curr, updates)
    except NoPathError:
        return PathSet()
    accepted = [best]
    pool: list[Path] = []

    for _ in range(2, k + 1):
        prev = accepted[-1].vertices
        for i in range(1, len(prev)):
            root = prev[:i]
            spur = root[-1]
            hidden = yen_edge_suppression(inst, view, accepted, root)
            for up in hidden:
                view.override(up.edge, INF)
            spur_state = state.clone()
            try:
                spur_path = dstar.replan(spur_state, view, spur, hidden)
            except NoPathError:
                spur_path = None
            finally:
                for up in hidden:
                    view.clear_override(up.edge)
            if spur_path is None:
                continue
            vertices = root[:-1] + spur_path.vertices
            candidate = Path(vertices, view.path_cost(vertices))
            candidate_admission(pool, accepted, candidate)
        if not pool:
            break
        accepted.append(pool.pop(0))
    return PathSet(accepted, pool)
