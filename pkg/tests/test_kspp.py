import random

import oracles
from conftest import build_instance, fresh_view, random_connected_instance
from scoutplan import dstar, kspp
from scoutplan.core import INF, Path
from scoutplan.dstar import CostUpdate


def diamond():
    coords = [(0.0, 0.0), (0.5, 0.3), (0.5, -0.3), (1.0, 0.0)]
    # p -> {a, b} -> d with side costs (1, 1) and (2, 2)
    return build_instance(
        coords, [(0, 1, 1.0), (1, 3, 1.0), (0, 2, 2.0), (2, 3, 2.0)], p=0, d=3
    )


def plan(inst, view, k, updates=None, state=None, v_curr=None):
    if state is None:
        state = dstar.initialize(inst, view, inst.p, inst.d)
    return (
        kspp.update_k_paths(inst, view, state, inst.p if v_curr is None else v_curr, updates or [], k),
        state,
    )


class TestBasics:
    def test_diamond_two_paths(self):
        inst = diamond()
        view = fresh_view(inst)
        pset, _ = plan(inst, view, 2)
        assert [p.vertices for p in pset] == [(0, 1, 3), (0, 2, 3)]
        assert [p.cost for p in pset] == [2.0, 4.0]

    def test_k_exceeding_simple_paths(self):
        inst = diamond()
        view = fresh_view(inst)
        pset, _ = plan(inst, view, 10)
        assert len(pset) == 2

    def test_no_path_returns_empty_set(self):
        inst = diamond()
        view = fresh_view(inst)
        state = dstar.initialize(inst, view, inst.p, inst.d)
        ups = []
        for a, b in ((0, 1), (0, 2)):
            eid = inst.ugv_edge_between(a, b)
            ups.append(CostUpdate(eid, view.cost(eid), INF))
            view.override(eid, INF)
        pset = kspp.update_k_paths(inst, view, state, inst.p, ups, 3)
        assert len(pset) == 0
        assert pset.best() is None

    def test_costs_sorted_and_paths_simple(self, rng):
        for _ in range(30):
            inst = random_connected_instance(rng)
            view = fresh_view(inst)
            pset, _ = plan(inst, view, 4)
            costs = [p.cost for p in pset]
            assert costs == sorted(costs)
            for p in pset:
                assert p.vertices[0] == inst.p
                assert p.vertices[-1] == inst.d
                assert len(set(p.vertices)) == len(p.vertices)


class TestSuppression:
    def test_shared_start_suppresses_one_edge_per_path(self):
        inst = diamond()
        view = fresh_view(inst)
        a = [Path((0, 1, 3), 2.0), Path((0, 2, 3), 4.0)]
        ups = kspp.yen_edge_suppression(inst, view, a, (0,))
        assert len(ups) == 2
        assert {u.edge for u in ups} == {
            inst.ugv_edge_between(0, 1),
            inst.ugv_edge_between(0, 2),
        }
        assert all(u.new_cost == INF for u in ups)

    def test_single_vertex_root_removes_no_nodes(self):
        inst = diamond()
        view = fresh_view(inst)
        ups = kspp.yen_edge_suppression(inst, view, [Path((0, 1, 3), 2.0)], (0,))
        # Only the continuation edge, no node-removal suppressions.
        assert {u.edge for u in ups} == {inst.ugv_edge_between(0, 1)}

    def test_interior_nodes_fully_suppressed(self):
        inst = diamond()
        view = fresh_view(inst)
        ups = kspp.yen_edge_suppression(inst, view, [Path((0, 1, 3), 2.0)], (0, 1))
        # Root interior {0}: both edges at vertex 0, plus continuation (1,3).
        assert {u.edge for u in ups} == {
            inst.ugv_edge_between(0, 1),
            inst.ugv_edge_between(0, 2),
            inst.ugv_edge_between(1, 3),
        }

    def test_restoration_is_exact(self, rng):
        inst = random_connected_instance(rng)
        view = fresh_view(inst)
        before = {eid: view.cost(eid) for eid in inst.ugv_edge_ids}
        plan(inst, view, 4)
        after = {eid: view.cost(eid) for eid in inst.ugv_edge_ids}
        assert before == after
        assert not view.overlay


class TestAdmission:
    def test_duplicate_rejected(self):
        pool = [Path((0, 1, 3), 2.0)]
        kspp.candidate_admission(pool, [], Path((0, 1, 3), 2.0))
        assert len(pool) == 1

    def test_already_ranked_rejected(self):
        pool = []
        kspp.candidate_admission(pool, [Path((0, 1, 3), 2.0)], Path((0, 1, 3), 2.0))
        assert pool == []

    def test_equal_cost_orders_lexicographically(self):
        pool = []
        kspp.candidate_admission(pool, [], Path((0, 2, 3), 5.0))
        kspp.candidate_admission(pool, [], Path((0, 1, 3), 5.0))
        assert [p.vertices for p in pool] == [(0, 1, 3), (0, 2, 3)]


class TestSharedStateIsolation:
    def test_rank2_leaves_shared_state_bit_identical(self, rng):
        for _ in range(10):
            inst = random_connected_instance(rng)
            view = fresh_view(inst)
            state = dstar.initialize(inst, view, inst.p, inst.d)
            kspp.update_k_paths(inst, view, state, inst.p, [], 1)
            g0, rhs0 = state.g.copy(), state.rhs.copy()
            km0, items0 = state.k_m, sorted(state.queue._items)
            state2 = state  # same object, ranks 2+ must not mutate it
            kspp.update_k_paths(inst, view, state2, inst.p, [], 4)
            assert state2.g == g0
            assert state2.rhs == rhs0
            assert state2.k_m == km0
            assert sorted(state2.queue._items) == items0


class TestOracleEquivalence:
    def test_small_graphs_match_enumeration_and_yen(self, rng):
        for trial in range(60):
            inst = random_connected_instance(rng, n_min=5, n_max=8)
            view = fresh_view(inst)
            pset, _ = plan(inst, view, 4)
            costs = oracles.view_costs(inst, view)
            enumerated = oracles.all_simple_paths(inst, costs, inst.p, inst.d)
            want = [c for c, _ in enumerated[:4]]
            assert [p.cost for p in pset] == want
            yen = oracles.yen_k_paths(inst, costs, inst.p, inst.d, 4)
            assert [p.vertices for p in pset] == yen

    def test_incremental_equals_from_scratch(self, rng):
        for trial in range(20):
            inst = random_connected_instance(rng, n_min=6, n_max=10)
            view = fresh_view(inst)
            state = dstar.initialize(inst, view, inst.p, inst.d)
            pset = kspp.update_k_paths(inst, view, state, inst.p, [], 3)
            v_curr = inst.p
            for eid in sorted(inst.impeded_ids):
                old = view.cost(eid)
                true = inst.edges[eid].distribution.sample(rng)
                view.knowledge.reveal(eid, true)
                best = pset.best()
                if best is not None and len(best.vertices) > 1:
                    v_curr = best.vertices[1]
                pset = kspp.update_k_paths(
                    inst, view, state, v_curr, [CostUpdate(eid, old, view.cost(eid))], 3
                )
                costs = oracles.view_costs(inst, view)
                yen = oracles.yen_k_paths(inst, costs, v_curr, inst.d, 3)
                assert [p.vertices for p in pset] == yen
