import pytest
from hypothesis import given, settings

from streamweave.assign import (
    StreamAssignment,
    SyncPlan,
    assign_streams,
    assignment_from_matching,
    build_bipartite,
    min_sync_plan,
)
from streamweave.errors import TooLarge
from streamweave.graph import CompGraph, TaskNode, minimum_equivalent_graph
from streamweave.oracle import (
    enumerate_assignments,
    enumerate_matchings,
    min_syncs_brute,
    oracle_plan_is_safe,
    verify_given,
    verify_optimal,
)

from _brute import brute_max_concurrent, brute_min_plan_size, brute_plan_safe
from _corpus import corpus, dags

DIAMOND = CompGraph.build(
    [TaskNode(0, 1), TaskNode(1, 4), TaskNode(2, 2), TaskNode(3, 1)],
    [(0, 1), (0, 2), (1, 3), (2, 3)],
)

BELL = {1: 1, 2: 2, 3: 5, 4: 15, 5: 52, 6: 203, 7: 877}


def chain(n):
    return CompGraph.build([TaskNode(i) for i in range(n)], [(i, i + 1) for i in range(n - 1)])


class TestSafetyOracle:
    def test_empty_plan_safe_when_single_stream(self):
        f = StreamAssignment({0: 0, 1: 0, 2: 0, 3: 0})
        assert oracle_plan_is_safe(DIAMOND, f, ())

    def test_cross_edges_need_events(self):
        f = StreamAssignment({0: 0, 1: 0, 2: 1, 3: 0})
        assert not oracle_plan_is_safe(DIAMOND, f, ())
        assert not oracle_plan_is_safe(DIAMOND, f, ((0, 2),))
        assert oracle_plan_is_safe(DIAMOND, f, ((0, 2), (2, 3)))

    def test_agrees_with_closure_brute_on_corpus(self):
        from itertools import combinations

        for g in corpus(30, max_nodes=5):
            f, _ = assign_streams(g)
            cross = [e for e in g.edges if f.stream_of[e[0]] != f.stream_of[e[1]]]
            for size in range(min(len(cross), 4) + 1):
                for combo in combinations(cross, size):
                    assert oracle_plan_is_safe(g, f, combo) == brute_plan_safe(
                        g, f.stream_of, combo
                    )


class TestMinSyncsBrute:
    def test_diamond_minimum_is_two(self):
        f, _ = assign_streams(DIAMOND)
        assert min_syncs_brute(DIAMOND, f) == 2

    def test_matches_full_subset_scan(self):
        # the set-cover search against a plain powerset walk
        for g in corpus(60, max_nodes=6):
            f, _ = assign_streams(g)
            expect = brute_min_plan_size(g, f.stream_of)
            if expect is None:
                continue
            assert min_syncs_brute(g, f) == expect

    def test_too_large_guard(self):
        wide = CompGraph.build(
            [TaskNode(i) for i in range(12)],
            [(u, v) for u in range(6) for v in range(6, 12)],  # 36 edges
        )
        f, _ = assign_streams(wide)
        with pytest.raises(TooLarge):
            min_syncs_brute(wide, f)


class TestEnumeration:
    def test_chain_partitions_all_qualify(self):
        # every pair in a chain is ordered, so every set partition is a
        # maximum-concurrency assignment
        for n in (1, 2, 3, 4, 5):
            assert len(enumerate_assignments(chain(n))) == BELL[n]

    def test_antichain_has_single_assignment(self):
        g = CompGraph.build([TaskNode(i) for i in range(4)], [])
        (f,) = enumerate_assignments(g)
        assert f.num_streams == 4

    def test_enumerated_assignments_are_max_concurrent_and_complete(self):
        for g in corpus(30, max_nodes=5):
            found = enumerate_assignments(g)
            for f in found:
                assert brute_max_concurrent(g, f.stream_of)
            algo_f, _ = assign_streams(g)
            assert any(f.stream_of == algo_f.stream_of for f in found)

    def test_enumeration_cap(self):
        g = CompGraph.build([TaskNode(i) for i in range(11)], [])
        with pytest.raises(TooLarge):
            enumerate_assignments(g)

    def test_diamond_matchings(self):
        b = build_bipartite(minimum_equivalent_graph(DIAMOND))
        ms = enumerate_matchings(b)
        assert len(ms) == 9
        assert max(len(m.pairs) for m in ms) == 2
        assert sum(1 for m in ms if len(m.pairs) == 2) == 4


class TestVerify:
    def test_diamond_report_bytes(self):
        rep = verify_optimal(DIAMOND)
        assert rep.to_json() == (
            '{"optimal":true,"algo_syncs":2,"oracle_min":2,"assignments_checked":15}'
        )

    def test_verify_cap_is_seven_nodes(self):
        g = CompGraph.build([TaskNode(i) for i in range(8)], [])
        with pytest.raises(TooLarge):
            verify_optimal(g)

    def test_verify_given_flags_wasteful_assignment(self):
        meg = minimum_equivalent_graph(DIAMOND)
        f = StreamAssignment({0: 0, 1: 0, 2: 1, 3: 2})
        plan = min_sync_plan(meg, f)
        assert sorted(plan.edges) == [(0, 2), (1, 3), (2, 3)]
        rep = verify_given(DIAMOND, f, plan)
        assert not rep.optimal
        assert rep.algo_syncs == 3 and rep.oracle_min == 2

    def test_verify_given_accepts_algorithm_output(self):
        for g in corpus(20, max_nodes=6):
            f, plan = assign_streams(g)
            assert verify_given(g, f, plan).optimal


class TestClosedFormLaws:
    @settings(max_examples=40, deadline=None)
    @given(dags(max_nodes=5))
    def test_closed_form_for_every_matching(self, g):
        # |min plan| == |E'| - |m| for every matching, not just maximum ones
        meg = minimum_equivalent_graph(g)
        b = build_bipartite(meg)
        for m in enumerate_matchings(b):
            f = assignment_from_matching(meg, m)
            assert min_syncs_brute(g, f) == len(meg.edges) - len(m.pairs)

    @settings(max_examples=30, deadline=None)
    @given(dags(max_nodes=5))
    def test_reduction_preserves_safety_and_concurrency(self, g):
        # evaluating on the reduced graph changes nothing
        from itertools import combinations

        reduced = minimum_equivalent_graph(g).to_graph()
        f, _ = assign_streams(g)
        assert brute_max_concurrent(g, f.stream_of) == brute_max_concurrent(
            reduced, f.stream_of
        )
        cross = [e for e in reduced.edges if f.stream_of[e[0]] != f.stream_of[e[1]]]
        for size in range(min(len(cross), 3) + 1):
            for combo in combinations(cross[:4], size):
                assert brute_plan_safe(g, f.stream_of, combo) == brute_plan_safe(
                    reduced, f.stream_of, combo
                )
