"""Sweep per-op submission overhead and report both modes' makespans.

For a fixed workload, runs the framework submitter and the captured-schedule
replay at each overhead level and prints one row per level with the exact
speedup of replay over framework. Replay overhead stays pinned (default 1)
while the framework overhead sweeps, mirroring the asymmetry the replay
mechanism is meant to exploit.

Usage:
  python3 scripts/overhead_sweep.py
  python3 scripts/overhead_sweep.py --kind chain --n 50 --duration 10 \
      --overheads 0,5,10,15,25,50 --csv sweep.csv
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from streamweave.assign import assign_streams
from streamweave.schedule import pre_run
from streamweave.sim import SimConfig, run_framework_mode, simulate
from streamweave.workloads import generate, workload_from_obj


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kind", default="chain")
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--width", type=int, default=4)
    ap.add_argument("--layers", type=int, default=4)
    ap.add_argument("--edge-prob", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--duration", type=int, default=10)
    ap.add_argument("--overheads", default="0,1,2,5,10,15,25,50")
    ap.add_argument("--overhead-replay", type=int, default=1)
    ap.add_argument("--capacity", type=int, default=0, help="0 = unbounded")
    ap.add_argument("--csv", help="also write rows to this CSV file")
    args = ap.parse_args()

    spec = workload_from_obj(
        {
            "kind": args.kind,
            "n": args.n,
            "width": args.width,
            "layers": args.layers,
            "edge_prob": args.edge_prob,
            "seed": args.seed,
            "duration": {"constant": args.duration},
        }
    )
    g = generate(spec)
    f, plan = assign_streams(g)
    ts = pre_run(g, f, plan)
    capacity = None if args.capacity == 0 else args.capacity

    rows = []
    for overhead in (int(t) for t in args.overheads.split(",")):
        cfg = SimConfig(
            capacity=capacity,
            overhead_framework=overhead,
            overhead_replay=args.overhead_replay,
        )
        fw = run_framework_mode(g, f, plan, cfg)
        rp = simulate(ts, g, cfg)
        ratio = Fraction(fw.makespan, rp.makespan)
        rows.append((overhead, fw.makespan, rp.makespan, ratio))

    print(f"{len(g.nodes)} tasks, {f.num_streams} streams, {len(plan)} syncs")
    print(f"{'overhead':>8}  {'framework':>9}  {'replay':>7}  {'speedup':>7}")
    for overhead, fw_ms, rp_ms, ratio in rows:
        print(f"{overhead:>8}  {fw_ms:>9}  {rp_ms:>7}  {float(ratio):>7.3f}")

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["overhead", "framework_makespan", "replay_makespan", "speedup"])
            for overhead, fw_ms, rp_ms, ratio in rows:
                writer.writerow([overhead, fw_ms, rp_ms, float(ratio)])
        print(f"wrote {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
