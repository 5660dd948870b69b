"""Independent reference implementations used only to check the library.

Everything here is deliberately written the slow, obvious way: plain
Dijkstra, textbook Yen on graph copies, exhaustive path enumeration,
factorial tour enumeration, and a straight-line transcription of the
priority formulas.
"""

from __future__ import annotations

import heapq

INF = float("inf")


def view_costs(inst, view):
    """Edge-id -> cost mapping for the UGV edges under a view."""
    return {eid: view.cost(eid) for eid in inst.ugv_edge_ids}


def dijkstra_to_dest(inst, costs, dest, blocked_vertices=frozenset()):
    """Distance of every vertex to dest, ignoring blocked vertices."""
    n = inst.n_vertices
    dist = [INF] * n
    if dest in blocked_vertices:
        return dist
    dist[dest] = 0.0
    pq = [(0.0, dest)]
    while pq:
        dv, v = heapq.heappop(pq)
        if dv > dist[v]:
            continue
        for w, eid in inst.ugv_adj[v]:
            if w in blocked_vertices:
                continue
            c = costs.get(eid, INF)
            if c == INF:
                continue
            alt = dv + c
            if alt < dist[w]:
                dist[w] = alt
                heapq.heappush(pq, (alt, w))
    return dist


def greedy_path(inst, costs, dist, source, dest, blocked_vertices=frozenset()):
    """Follow cost + dist greedily to dest, lowest vertex id on ties."""
    if dist[source] == INF:
        return None
    path = [source]
    v = source
    while v != dest:
        best = INF
        nxt = -1
        for w, eid in inst.ugv_adj[v]:
            if w in blocked_vertices:
                continue
            c = costs.get(eid, INF)
            cand = c + dist[w]
            if cand < best or (cand == best and w < nxt):
                best = cand
                nxt = w
        if nxt < 0 or best == INF:
            return None
        v = nxt
        path.append(v)
        if len(path) > inst.n_vertices:
            return None
    return tuple(path)


def path_cost(inst, costs, vertices):
    total = 0.0
    for a, b in zip(vertices, vertices[1:]):
        total += costs[inst.ugv_edge_between(a, b)]
    return total


def shortest_path(inst, costs, source, dest, blocked_edges=frozenset(), blocked_vertices=frozenset()):
    eff = dict(costs)
    for eid in blocked_edges:
        eff[eid] = INF
    dist = dijkstra_to_dest(inst, eff, dest, blocked_vertices)
    return greedy_path(inst, eff, dist, source, dest, blocked_vertices)


def yen_k_paths(inst, costs, source, dest, k):
    """Textbook loopless k shortest paths; ties by (cost, sequence)."""
    first = shortest_path(inst, costs, source, dest)
    if first is None:
        return []
    a_list = [first]
    pool: list[tuple[float, tuple[int, ...]]] = []
    pool_seqs: set[tuple[int, ...]] = set()
    for _ in range(2, k + 1):
        prev = a_list[-1]
        for i in range(1, len(prev)):
            root = prev[:i]
            spur = root[-1]
            blocked_edges = set()
            for p in a_list:
                if len(p) > i and p[:i] == root:
                    blocked_edges.add(inst.ugv_edge_between(p[i - 1], p[i]))
            blocked_vertices = frozenset(root[:-1])
            sp = shortest_path(inst, costs, spur, dest, blocked_edges, blocked_vertices)
            if sp is None:
                continue
            cand = root[:-1] + sp
            if cand in pool_seqs or cand in a_list:
                continue
            pool_seqs.add(cand)
            pool.append((path_cost(inst, costs, cand), cand))
        if not pool:
            break
        pool.sort()
        cost, seq = pool.pop(0)
        pool_seqs.discard(seq)
        a_list.append(seq)
    return a_list


def all_simple_paths(inst, costs, source, dest):
    """Every loopless source->dest path with its cost, sorted by (cost, seq)."""
    out = []
    seen = [False] * inst.n_vertices

    def dfs(v, acc):
        if v == dest:
            out.append((path_cost(inst, costs, tuple(acc)), tuple(acc)))
            return
        for w, eid in inst.ugv_adj[v]:
            if seen[w] or costs.get(eid, INF) == INF:
                continue
            seen[w] = True
            acc.append(w)
            dfs(w, acc)
            acc.pop()
            seen[w] = False

    seen[source] = True
    dfs(source, [source])
    out.sort()
    return out


def rpp_brute_force(graph):
    """Best (inspections, cost) over all orders and directions, by
    exhaustive enumeration with window checks."""
    n = graph.size
    arc = graph.arc
    twin = graph.twin
    deadlines = [0.0] + [graph.nodes[j].deadline for j in range(1, n)]
    best = (0, 0.0)

    def better(a, b):
        return a[0] > b[0] or (a[0] == b[0] and a[1] < b[1])

    def extend(v, cost, used, count):
        nonlocal best
        if better((count, cost), best):
            best = (count, cost)
        for j in range(1, n):
            if j in used or twin[j] in used:
                continue
            a = arc[v][j]
            if a == INF:
                continue
            t = cost + a
            if t > deadlines[j]:
                continue
            used.add(j)
            extend(j, t, used, count + 1)
            used.discard(j)

    extend(0, 0.0, set(), 0)
    return best


def replay_tour_times(graph, visited, uav_time_offset=0.0):
    """Completion time of each inspection along a tour, in absolute time."""
    t = uav_time_offset
    out = []
    prev = 0
    for idx in visited[1:]:
        t += graph.arc[prev][idx]  # arrive ready to start this edge
        out.append((graph.nodes[idx].edge, t + graph.nodes[idx].tau))
        prev = idx
    return out


def replay_ugv_arrivals(inst, realization, events):
    """Re-derive the ground vehicle's timeline from its arrival events.

    Checks continuity (consecutive vertices share an edge), the no-waiting
    rule (arrival gaps equal true traversal costs) and returns the final
    arrival time.
    """
    arrivals = [(e.time, e.data[0]) for e in events if e.kind == "ugv_arrives"]
    pos = inst.p
    t = 0.0
    for when, v in arrivals:
        if v == pos:  # start == destination edge case
            assert when == 0.0
            continue
        eid = inst.ugv_edge_between(pos, v)
        rec = inst.edges[eid]
        t += realization[eid] if rec.impeded else rec.ugv_cost
        assert abs(when - t) < 1e-9, (when, t)
        pos = v
    assert pos == inst.d
    return t


def paa_scores(inst, view, metric, path_set, critical, uav_pos, k, weights):
    """Straight-line re-derivation of the four priority signals."""
    paths = [p.vertices for p in path_set]
    edge_of = {}
    for ce in critical:
        rec = inst.edges[ce.edge]
        edge_of[ce.edge] = (rec.u, rec.v)

    def on_path(eid, vs):
        u, v = edge_of[eid]
        return any((a, b) in ((u, v), (v, u)) for a, b in zip(vs, vs[1:]))

    def prefix_cost(vs, upto):
        total = 0.0
        for a, b in zip(vs[:upto], vs[1 : upto + 1]):
            total += view.cost(inst.ugv_edge_between(a, b))
        return total

    lam = {}
    for ce in critical:
        eid = ce.edge
        vals = []
        for rank, vs in enumerate(paths):
            if not on_path(eid, vs):
                continue
            if rank == 0:
                u, v = edge_of[eid]
                for i, (a, b) in enumerate(zip(vs, vs[1:])):
                    if (a, b) in ((u, v), (v, u)):
                        vals.append(prefix_cost(vs, i))
                        break
            else:
                shared = 0
                best = paths[0]
                while (
                    shared + 1 < len(vs)
                    and shared + 1 < len(best)
                    and vs[shared + 1] == best[shared + 1]
                ):
                    shared += 1
                vals.append(prefix_cost(vs, shared))
        lam[eid] = min(vals)
    lam_lo, lam_hi = min(lam.values()), max(lam.values())

    var = {ce.edge: inst.edges[ce.edge].distribution.variance() for ce in critical}
    var_hi = max(var.values())
    dist = {
        ce.edge: min(metric.cost(uav_pos, edge_of[ce.edge][0]), metric.cost(uav_pos, edge_of[ce.edge][1]))
        for ce in critical
    }
    d_hi = max(dist.values())

    scores = {}
    for ce in critical:
        eid = ce.edge
        p1 = sum(1 for vs in paths if on_path(eid, vs)) / k
        p2 = 1.0 if lam_lo == lam_hi else (lam_hi - lam[eid]) / (lam_hi - lam_lo)
        p3 = 1.0 if var_hi == 0 else var[eid] / var_hi
        p4 = 1.0 if d_hi == 0 else 1.0 - dist[eid] / d_hi
        scores[eid] = (
            weights.w1 * p1 + weights.w2 * p2 + weights.w3 * p3 + weights.w4 * p4,
            (p1, p2, p3, p4),
        )
    return scores
