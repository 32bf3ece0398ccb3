"""Show how device occupancy caps multi-stream speedup on fan-out graphs.

Builds fork-join graphs of increasing width and runs each one under a range
of per-task demands against a fixed device capacity. When branches are light
the multi-stream layout approaches width-x speedup over a single stream;
once demand saturates capacity the streams serialize and the ratio falls
back toward 1. Durations are long relative to the fork and join tasks so
the middle layer dominates.

Usage:
  python3 scripts/occupancy_experiment.py
  python3 scripts/occupancy_experiment.py --widths 2,4,8 --capacity 8
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from streamweave.assign import StreamAssignment, SyncPlan, assign_streams
from streamweave.graph import CompGraph, TaskNode
from streamweave.schedule import pre_run
from streamweave.sim import SimConfig, simulate


def fork_join(width: int, branch_duration: int, demand: int) -> CompGraph:
    nodes = (
        [TaskNode(0, 1, demand)]
        + [TaskNode(i, branch_duration, demand) for i in range(1, width + 1)]
        + [TaskNode(width + 1, 1, demand)]
    )
    edges = [(0, i) for i in range(1, width + 1)] + [
        (i, width + 1) for i in range(1, width + 1)
    ]
    return CompGraph.build(nodes, edges)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--widths", default="2,3,4,6,8")
    ap.add_argument("--capacity", type=int, default=8)
    ap.add_argument("--branch-duration", type=int, default=1000)
    args = ap.parse_args()

    cap = args.capacity
    demands = sorted({1, max(1, cap // 4), max(1, cap // 2), cap})
    print(f"capacity {cap}, branch duration {args.branch_duration}")
    print(f"{'width':>5}  {'demand':>6}  {'single':>8}  {'multi':>8}  {'speedup':>7}  {'ideal':>5}")
    for width in (int(t) for t in args.widths.split(",")):
        for demand in demands:
            g = fork_join(width, args.branch_duration, demand)
            cfg = SimConfig(capacity=cap)
            f, plan = assign_streams(g)
            multi = simulate(pre_run(g, f, plan), g, cfg)
            single_f = StreamAssignment({n.id: 0 for n in g.nodes})
            single = simulate(pre_run(g, single_f, SyncPlan(())), g, cfg)
            ratio = Fraction(single.makespan, multi.makespan)
            ideal = min(width, cap // demand)
            print(
                f"{width:>5}  {demand:>6}  {single.makespan:>8}  {multi.makespan:>8}"
                f"  {float(ratio):>7.3f}  {ideal:>5}"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
