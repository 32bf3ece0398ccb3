import json
from fractions import Fraction

import pytest

from streamweave.compare import (
    MODE_ORDER,
    compare_modes,
    compare_to_json,
    render_table,
)
from streamweave.errors import EmptyRun
from streamweave.graph import CompGraph, TaskNode
from streamweave.sim import SimConfig
from streamweave.workloads import Chain, Constant, ForkJoin, WorkloadSpec, generate

from _corpus import corpus


def fork_join_4(demand):
    nodes = (
        [TaskNode(0, 1, demand)]
        + [TaskNode(i, 1000, demand) for i in range(1, 5)]
        + [TaskNode(5, 1, demand)]
    )
    edges = [(0, i) for i in range(1, 5)] + [(i, 5) for i in range(1, 5)]
    return CompGraph.build(nodes, edges)


class TestRatios:
    def test_fork_join_pair(self):
        rep = compare_modes(generate(WorkloadSpec(ForkJoin(2))), SimConfig())
        assert [r.makespan for r in rep.modes] == [4, 3, 4, 3]
        assert rep.replay_multi_over_single == Fraction(4, 3)
        assert rep.stream_count == 2
        assert rep.sync_count == 2

    def test_chain_without_overhead_is_a_wash(self):
        rep = compare_modes(generate(WorkloadSpec(Chain(5), Constant(2))), SimConfig())
        assert all(r.makespan == 10 for r in rep.modes)
        assert all(r.speedup_vs_baseline == 1 for r in rep.modes)
        assert rep.replay_multi_over_single == 1
        assert rep.replay_over_framework == 1

    def test_replay_beats_framework_on_overhead_bound_chain(self):
        rep = compare_modes(
            generate(WorkloadSpec(Chain(50), Constant(10))),
            SimConfig(overhead_framework=15, overhead_replay=1),
        )
        assert rep.replay_over_framework == Fraction(1250, 501)
        assert rep.replay_over_framework > 2

    def test_wide_graph_near_ideal_speedup(self):
        rep = compare_modes(fork_join_4(1), SimConfig(capacity=16))
        assert rep.replay_multi_over_single == Fraction(667, 167)
        assert abs(float(rep.replay_multi_over_single) - 4.0) <= 0.04

    def test_saturated_device_gains_nothing(self):
        rep = compare_modes(fork_join_4(4), SimConfig(capacity=4))
        assert rep.replay_multi_over_single == Fraction(1)

    def test_baseline_row_is_identity(self):
        for g in corpus(20):
            rep = compare_modes(g, SimConfig(overhead_framework=3))
            assert rep.modes[0].speedup_vs_baseline == 1
            assert [(r.mode, r.layout) for r in rep.modes] == list(MODE_ORDER)

    def test_zero_duration_graph_rejected(self):
        g = CompGraph.build([TaskNode(0, 0)], [])
        with pytest.raises(EmptyRun):
            compare_modes(g, SimConfig())


class TestOracleStatus:
    def test_small_graph_verifies(self):
        rep = compare_modes(generate(WorkloadSpec(ForkJoin(2))), SimConfig(), with_oracle=True)
        assert rep.oracle_status == "optimal"

    def test_large_graph_reports_too_large(self):
        rep = compare_modes(generate(WorkloadSpec(Chain(8))), SimConfig(), with_oracle=True)
        assert rep.oracle_status == "too-large"

    def test_disabled_by_default(self):
        rep = compare_modes(generate(WorkloadSpec(Chain(2))), SimConfig())
        assert rep.oracle_status is None


class TestRendering:
    def test_json_document(self):
        rep = compare_modes(generate(WorkloadSpec(ForkJoin(2))), SimConfig(), with_oracle=True)
        doc = json.loads(compare_to_json(rep))
        assert list(doc) == [
            "stream_count",
            "sync_count",
            "modes",
            "replay_multi_over_single",
            "replay_over_framework",
            "oracle_status",
        ]
        assert doc["replay_multi_over_single"] == [4, 3]
        assert len(doc["modes"]) == 4
        assert doc["modes"][1] == {
            "mode": "framework",
            "layout": "multi",
            "makespan": 3,
            "gpu_active_time": 3,
            "num_streams": 2,
            "speedup_vs_baseline": [4, 3],
        }

    def test_json_omits_oracle_when_off(self):
        rep = compare_modes(generate(WorkloadSpec(Chain(2))), SimConfig())
        assert "oracle_status" not in json.loads(compare_to_json(rep))

    def test_table_layout(self):
        rep = compare_modes(generate(WorkloadSpec(ForkJoin(2))), SimConfig())
        lines = render_table(rep).splitlines()
        assert lines[0].split() == ["mode", "layout", "streams", "makespan", "active", "speedup"]
        assert set(lines[1]) <= {"-", " "}
        assert len(lines) == 7
        assert lines[2].startswith("framework  single")
        assert lines[-1] == "replay multi/single: 1.333  replay/framework: 1.000"

    def test_table_reports_oracle_line(self):
        rep = compare_modes(generate(WorkloadSpec(ForkJoin(2))), SimConfig(), with_oracle=True)
        assert render_table(rep).splitlines()[-1] == "oracle: optimal"
