import math
import random

import pytest

from scoutplan.core import (
    EdgeRecord,
    KnowledgeState,
    PlanningCostView,
    ProblemInstance,
    Realization,
    UniformCost,
)


def build_instance(coords, edge_specs, p=0, q=0, d=None, uav_speed=2.0, free_flight=False):
    """Compact instance builder for tests.

    edge_specs: (u, v, ugv_cost) for fixed edges or (u, v, (t_min, t_max))
    for impeded ones; aerial cost defaults to the straight-line time.
    """
    if d is None:
        d = len(coords) - 1
    edges = []
    for raw in edge_specs:
        u, v, cost = raw[:3]
        tau = raw[3] if len(raw) > 3 else max(math.dist(coords[u], coords[v]), 1e-6) / uav_speed
        if u > v:
            u, v = v, u
        eid = len(edges)
        if isinstance(cost, tuple):
            edges.append(EdgeRecord(eid, u, v, None, tau, UniformCost(*cost)))
        else:
            edges.append(EdgeRecord(eid, u, v, float(cost), tau))
    return ProblemInstance(coords, edges, p=p, q=q, d=d, uav_speed=uav_speed, uav_free_flight=free_flight)


def fresh_view(inst):
    return PlanningCostView(inst, KnowledgeState())


def line_instance(costs=(2.0, 3.0)):
    """Vertices on a line, consecutive fixed-cost edges."""
    n = len(costs) + 1
    coords = [(float(i), 0.0) for i in range(n)]
    specs = [(i, i + 1, max(c, 1.0)) for i, c in enumerate(costs)]
    return build_instance(coords, specs)


def random_connected_instance(rng, n_min=5, n_max=12, impeded_frac=0.3, free_flight=True):
    """Random geometric-ish connected instance with some impeded edges."""
    n = rng.randint(n_min, n_max)
    coords = [(rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(n)]
    order = list(range(n))
    rng.shuffle(order)
    pairs = set()
    for a, b in zip(order, order[1:]):
        pairs.add((min(a, b), max(a, b)))
    extra = rng.randint(n // 2, n + 3)
    for _ in range(extra):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            pairs.add((min(a, b), max(a, b)))
    specs = []
    for u, v in sorted(pairs):
        base = math.dist(coords[u], coords[v]) + rng.uniform(0.1, 5.0)
        if rng.random() < impeded_frac:
            specs.append((u, v, (base, base + rng.uniform(0.5, 40.0))))
        else:
            specs.append((u, v, base))
    p = 0
    d = n - 1
    q = rng.randrange(n)
    return build_instance(coords, specs, p=p, q=q, d=d, free_flight=free_flight)


def realize_all(inst, rng):
    from scoutplan.core import sample_realization

    return sample_realization(inst, rng)


@pytest.fixture
def rng():
    return random.Random(12345)
