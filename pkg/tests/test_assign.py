import pytest
from hypothesis import given, settings

from streamweave.assign import (
    BipartiteGraph,
    Matching,
    StreamAssignment,
    SyncPlan,
    assign_streams,
    assignment_from_json,
    assignment_to_json,
    assignment_from_matching,
    build_bipartite,
    fold_streams,
    is_max_concurrent,
    maximum_matching,
    min_sync_plan,
    plan_is_safe,
    validate_matching,
)
from streamweave.errors import InvalidMatching, NotMaxConcurrent, UnknownStream
from streamweave.graph import CompGraph, TaskNode, minimum_equivalent_graph
from streamweave.oracle import oracle_plan_is_safe, verify_optimal

from _brute import (
    brute_antichain_width,
    brute_max_concurrent,
    brute_max_matching_size,
    brute_plan_safe,
)
from _corpus import corpus, dags

DIAMOND = CompGraph.build(
    [TaskNode(0, 1), TaskNode(1, 4), TaskNode(2, 2), TaskNode(3, 1)],
    [(0, 1), (0, 2), (1, 3), (2, 3)],
)

DIAMOND_ASSIGNMENT_JSON = (
    '{"streams":[[0,1,3],[2]],"syncs":[[0,2],[2,3]],'
    '"meg_edges":[[0,1],[0,2],[1,3],[2,3]]}'
)


def left_adjacency(b: BipartiteGraph) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {}
    for x, y in b.edges:
        adj.setdefault(x, []).append(y)
    return adj


class TestMatching:
    def test_diamond_matching_is_pinned(self):
        meg = minimum_equivalent_graph(DIAMOND)
        m = maximum_matching(build_bipartite(meg))
        assert sorted(m.pairs) == [(0, 1), (1, 3)]

    def test_matching_size_matches_brute_on_corpus(self):
        for g in corpus(80):
            b = build_bipartite(minimum_equivalent_graph(g))
            m = maximum_matching(b)
            brute = brute_max_matching_size(
                sorted({x for x, _ in b.edges}), left_adjacency(b)
            )
            assert len(m.pairs) == brute

    def test_validate_matching_rejects_non_edge(self):
        b = BipartiteGraph(2, 2, ((0, 1),))
        with pytest.raises(InvalidMatching):
            validate_matching(b, Matching(pairs=((0, 0),)))

    def test_validate_matching_rejects_shared_endpoint(self):
        b = BipartiteGraph(2, 2, ((0, 0), (1, 0)))
        bad = Matching(pairs=((0, 0), (1, 0)))
        with pytest.raises(InvalidMatching):
            validate_matching(b, bad)


class TestAssignment:
    def test_diamond_streams_and_plan(self):
        f, plan = assign_streams(DIAMOND)
        assert f.stream_of == {0: 0, 1: 0, 2: 1, 3: 0}
        assert f.num_streams == 2
        assert sorted(plan.edges) == [(0, 2), (2, 3)]

    def test_canonical_labels_are_first_use_order(self):
        for g in corpus(60):
            f, _ = assign_streams(g)
            seen: list[int] = []
            from streamweave.graph import topological_order

            for v in topological_order(g):
                s = f.stream_of[v]
                if s not in seen:
                    seen.append(s)
            assert seen == list(range(f.num_streams))

    def test_assignment_is_max_concurrent_everywhere(self):
        for g in corpus(80):
            f, _ = assign_streams(g)
            assert is_max_concurrent(g, f)
            assert brute_max_concurrent(g, f.stream_of)

    def test_stream_count_at_least_antichain_width(self):
        # every stream is a chain, so no two members of one antichain can
        # share a stream; the widest antichain is a hard floor
        for g in corpus(60, max_nodes=6):
            f, _ = assign_streams(g)
            assert f.num_streams >= brute_antichain_width(g)

    def test_stream_count_may_exceed_width(self):
        # matched pairs follow reduced edges only, so a hub both children
        # share can strand siblings on their own streams even though the
        # underlying order admits wider chains; sync count stays minimal
        g = CompGraph.build(
            [TaskNode(i) for i in range(5)],
            [(0, 2), (1, 2), (2, 3), (2, 4)],
        )
        f, plan = assign_streams(g)
        assert brute_antichain_width(g) == 2
        assert f.num_streams == 3
        assert len(plan) == 2
        rep = verify_optimal(g)
        assert rep.optimal and rep.oracle_min == 2

    def test_single_stream_not_max_concurrent_on_diamond(self):
        f = StreamAssignment({0: 0, 1: 0, 2: 0, 3: 0})
        assert not is_max_concurrent(DIAMOND, f)

    @settings(max_examples=80, deadline=None)
    @given(dags())
    def test_sync_count_law(self, g):
        meg = minimum_equivalent_graph(g)
        m = maximum_matching(build_bipartite(meg))
        _, plan = assign_streams(g)
        assert len(plan) == len(meg.edges) - len(m.pairs)


class TestSyncPlan:
    def test_min_sync_plan_requires_all_nodes(self):
        meg = minimum_equivalent_graph(DIAMOND)
        with pytest.raises(UnknownStream):
            min_sync_plan(meg, StreamAssignment({0: 0, 1: 0, 2: 1}))

    def test_min_sync_plan_rejects_non_max_concurrent(self):
        meg = minimum_equivalent_graph(DIAMOND)
        with pytest.raises(NotMaxConcurrent):
            min_sync_plan(meg, StreamAssignment({0: 0, 1: 0, 2: 0, 3: 0}))

    def test_spec_partition_of_diamond_also_two_syncs(self):
        meg = minimum_equivalent_graph(DIAMOND)
        f = StreamAssignment({0: 0, 1: 0, 2: 1, 3: 1})
        plan = min_sync_plan(meg, f)
        assert sorted(plan.edges) == [(0, 2), (1, 3)]

    def test_plan_safety_predicates_agree(self):
        for g in corpus(60):
            f, plan = assign_streams(g)
            assert plan_is_safe(g, f, plan)
            assert oracle_plan_is_safe(g, f, plan.edges)
            assert brute_plan_safe(g, f.stream_of, plan.edges)

    def test_dropping_any_sync_breaks_safety(self):
        # minimality in the strong sense: every plan edge is load-bearing
        for g in corpus(40):
            f, plan = assign_streams(g)
            for e in plan.edges:
                rest = tuple(x for x in plan.edges if x != e)
                assert not brute_plan_safe(g, f.stream_of, rest)

    @settings(max_examples=60, deadline=None)
    @given(dags(max_nodes=6))
    def test_three_safety_definitions_agree_on_subsets(self, g):
        from itertools import combinations

        f, plan = assign_streams(g)
        cross = [e for e in g.edges if f.stream_of[e[0]] != f.stream_of[e[1]]]
        pool = cross[:5]
        for size in range(len(pool) + 1):
            for combo in combinations(pool, size):
                got = plan_is_safe(g, f, SyncPlan(tuple(combo)))
                assert got == oracle_plan_is_safe(g, f, combo)
                assert got == brute_plan_safe(g, f.stream_of, combo)


class TestFold:
    def test_fold_to_one_stream(self):
        f, plan = assign_streams(DIAMOND)
        f2, p2 = fold_streams(DIAMOND, f, plan, 1)
        assert f2.num_streams == 1
        assert set(p2.edges) == set(plan.edges)

    def test_fold_is_noop_when_under_cap(self):
        f, plan = assign_streams(DIAMOND)
        f2, p2 = fold_streams(DIAMOND, f, plan, 5)
        assert f2.stream_of == f.stream_of and p2.edges == plan.edges

    def test_fold_respects_cap_and_stays_safe(self):
        for g in corpus(40):
            f, plan = assign_streams(g)
            for cap in (1, 2, 3):
                f2, p2 = fold_streams(g, f, plan, cap)
                assert f2.num_streams <= max(cap, 1)
                assert len(f2.stream_of) == len(f.stream_of)
                assert brute_plan_safe(g, f2.stream_of, p2.edges)


class TestAssignmentJson:
    def test_diamond_frozen_bytes(self):
        f, plan = assign_streams(DIAMOND)
        meg = minimum_equivalent_graph(DIAMOND)
        assert assignment_to_json(DIAMOND, f, plan, meg) == DIAMOND_ASSIGNMENT_JSON

    def test_round_trip(self):
        for g in corpus(40):
            f, plan = assign_streams(g)
            meg = minimum_equivalent_graph(g)
            f2, p2 = assignment_from_json(assignment_to_json(g, f, plan, meg), g)
            assert f2.stream_of == f.stream_of
            assert sorted(p2.edges) == sorted(plan.edges)

    def test_unknown_node_in_file_raises(self):
        text = '{"streams":[[0,9]],"syncs":[],"meg_edges":[]}'
        with pytest.raises(UnknownStream):
            assignment_from_json(text, CompGraph.build([TaskNode(0)], []))


def test_assignment_from_matching_rejects_bad_matching():
    meg = minimum_equivalent_graph(DIAMOND)
    bad = Matching(pairs=((0, 0),))  # (0,0) is not an edge of the diamond MEG
    with pytest.raises(InvalidMatching):
        assignment_from_matching(meg, bad)
