"""Deterministic integer-time simulator of a multi-stream device.

Two actors share one timeline. A single submitter thread walks the captured
op order, spending a configured overhead per op before that op becomes
visible to the device. The device executes each stream as a FIFO: a launch
occupies its stream for the task's duration and holds `demand` units of
device capacity while running; a record fires its event once every earlier
op on its stream has completed; a wait blocks its stream until the event
fires.

The two submission modes differ only on the submitter side:

- replay: every op costs ``overhead_replay``; the submitter never looks at
  the graph and runs ahead of the device freely.
- framework: every op costs ``overhead_framework``, and the submitter does
  run-time dependency tracking, so it will not begin submitting a launch
  until all graph predecessors of that task have finished on the device.

Device rules are identical in both modes. Capacity contention is resolved
deterministically: at each instant, ready launches are granted capacity in
ascending stream id, and tasks ending at an instant release their demand
before grants at that instant are considered.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import json

from .assign import StreamAssignment, SyncPlan
from .errors import CapacityExceeded, DeadlockDetected, EmptyRun, GraphError
from .graph import CompGraph, critical_path_time
from .schedule import LAUNCH, RECORD, WAIT, TaskSchedule, pre_run, replay_order


class SubmitMode(Enum):
    FRAMEWORK = "framework"
    REPLAY = "replay"


@dataclass(frozen=True)
class SimConfig:
    capacity: int | None = None  # None models an unbounded device
    overhead_framework: int = 0
    overhead_replay: int = 0

    def __post_init__(self) -> None:
        if self.overhead_framework < 0 or self.overhead_replay < 0:
            raise ValueError("overheads must be non-negative")
        if self.capacity is not None and self.capacity < 1:
            raise ValueError("capacity must be at least 1")


@dataclass(frozen=True)
class SimResult:
    makespan: int
    gpu_active_time: int
    intervals: dict[int, tuple[int, int]]  # task id -> [start, end)
    events_fired: tuple[tuple[int, int], ...]  # (event id, fire time)


def simulate(ts: TaskSchedule, g: CompGraph, cfg: SimConfig) -> SimResult:
    """Replay a captured schedule; per-op cost is ``overhead_replay``."""
    return _run(ts, g, cfg, SubmitMode.REPLAY)


def run_framework_mode(
    g: CompGraph, f: StreamAssignment, plan: SyncPlan, cfg: SimConfig
) -> SimResult:
    """Execute the same op sequence with run-time scheduling costs.

    Per-op cost is ``overhead_framework``, and each launch is submitted only
    once all graph predecessors of its task have completed, modelling a
    framework that discovers readiness as it goes instead of replaying a
    captured schedule.
    """
    ts = pre_run(g, f, plan)
    return _run(ts, g, cfg, SubmitMode.FRAMEWORK)


def _run(ts: TaskSchedule, g: CompGraph, cfg: SimConfig, mode: SubmitMode) -> SimResult:
    known = {n.id for n in g.nodes}
    for stream in ts.streams:
        for op in stream:
            if op.kind == LAUNCH and op.arg not in known:
                raise GraphError(f"schedule launches unknown task {op.arg}")

    duration = {n.id: n.duration for n in g.nodes}
    demand = {n.id: n.demand for n in g.nodes}
    preds: dict[int, list[int]] = {n.id: [] for n in g.nodes}
    for u, v in g.edges:
        preds[v].append(u)

    if cfg.capacity is not None:
        for n in g.nodes:
            if n.demand > cfg.capacity:
                raise CapacityExceeded(
                    f"task {n.id} demands {n.demand} of capacity {cfg.capacity}"
                )

    flat = replay_order(ts)
    gated = mode is SubmitMode.FRAMEWORK
    cost = cfg.overhead_framework if gated else cfg.overhead_replay

    n_streams = len(ts.streams)
    queues: list[list[tuple[object, int]]] = [[] for _ in range(n_streams)]
    qpos = [0] * n_streams
    free_at = [0] * n_streams
    fired: dict[int, int] = {}
    fire_log: list[tuple[int, int]] = []
    intervals: dict[int, tuple[int, int]] = {}
    running: list[tuple[int, int]] = []  # (end, demand)
    host = 0
    sub_idx = 0

    def pump() -> bool:
        nonlocal host, sub_idx
        changed = False
        while sub_idx < len(flat):
            sid, op = flat[sub_idx]
            begin = host
            if gated and op.kind == LAUNCH:
                ps = preds[op.arg]
                if any(p not in intervals for p in ps):
                    break  # readiness unknown until every predecessor starts
                begin = max([host] + [intervals[p][1] for p in ps])
            visible = begin + cost
            queues[sid].append((op, visible))
            host = visible
            sub_idx += 1
            changed = True
        return changed

    def available(now: int) -> int:
        assert cfg.capacity is not None
        return cfg.capacity - sum(d for e, d in running if e > now)

    def wave(now: int) -> bool:
        changed = False
        for s in range(n_streams):
            while qpos[s] < len(queues[s]):
                op, visible = queues[s][qpos[s]]
                ready = max(visible, free_at[s])
                if op.kind == WAIT:
                    when = fired.get(op.arg)
                    if when is None:
                        break
                    ready = max(ready, when)
                    if ready > now:
                        break
                    free_at[s] = ready
                elif op.kind == RECORD:
                    if ready > now:
                        break
                    fired[op.arg] = ready
                    fire_log.append((op.arg, ready))
                    free_at[s] = ready
                else:
                    if ready > now:
                        break
                    if cfg.capacity is not None and demand[op.arg] > available(now):
                        break
                    end = now + duration[op.arg]
                    intervals[op.arg] = (now, end)
                    running.append((end, demand[op.arg]))
                    free_at[s] = end
                qpos[s] += 1
                changed = True
        return changed

    def drained() -> bool:
        return sub_idx == len(flat) and all(
            qpos[s] == len(queues[s]) for s in range(n_streams)
        )

    def next_candidate(now: int) -> int | None:
        best: int | None = None
        for s in range(n_streams):
            if qpos[s] == len(queues[s]):
                continue
            op, visible = queues[s][qpos[s]]
            ready = max(visible, free_at[s])
            if op.kind == WAIT:
                when = fired.get(op.arg)
                if when is None:
                    continue  # unblocked only by a future record
                ready = max(ready, when)
            if ready > now and (best is None or ready < best):
                best = ready
        for end, _ in running:
            if end > now and (best is None or end < best):
                best = end
        return best

    pump()
    now = 0
    while True:
        while wave(now) or pump():
            pass
        if drained():
            break
        nxt = next_candidate(now)
        if nxt is None:
            raise DeadlockDetected(
                f"no progress possible at t={now} with ops still pending"
            )
        now = nxt

    makespan = max((end for _, end in intervals.values()), default=0)
    return SimResult(
        makespan=makespan,
        gpu_active_time=_union_measure(intervals.values()),
        intervals=intervals,
        events_fired=tuple(sorted(fire_log)),
    )


def _union_measure(spans) -> int:
    ordered = sorted((s, e) for s, e in spans if e > s)
    total = 0
    cur_start: int | None = None
    cur_end = 0
    for s, e in ordered:
        if cur_start is None or s > cur_end:
            if cur_start is not None:
                total += cur_end - cur_start
            cur_start, cur_end = s, e
        elif e > cur_end:
            cur_end = e
    if cur_start is not None:
        total += cur_end - cur_start
    return total


@dataclass(frozen=True)
class MetricsReport:
    makespan: int
    gpu_active_time: int
    critical_path: int
    gpu_active_ratio: Fraction
    critical_ratio: Fraction | None  # undefined for runs with no busy time


def metrics(r: SimResult, g: CompGraph) -> MetricsReport:
    if r.makespan == 0:
        raise EmptyRun("metrics of a zero-length run")
    cp = critical_path_time(g)
    active = r.gpu_active_time
    return MetricsReport(
        makespan=r.makespan,
        gpu_active_time=active,
        critical_path=cp,
        gpu_active_ratio=Fraction(active, r.makespan),
        critical_ratio=Fraction(cp, active) if active > 0 else None,
    )


def speedup(baseline: SimResult, other: SimResult) -> Fraction:
    """How many times faster ``other`` finishes than ``baseline``."""
    if other.makespan == 0:
        raise EmptyRun("speedup against a zero-length run")
    return Fraction(baseline.makespan, other.makespan)


def sim_result_to_json(r: SimResult) -> str:
    doc = {
        "makespan": r.makespan,
        "gpu_active_time": r.gpu_active_time,
        "intervals": {str(t): list(span) for t, span in sorted(r.intervals.items())},
        "events_fired": [list(p) for p in r.events_fired],
    }
    return json.dumps(doc, separators=(",", ":"))


def chrome_trace(r: SimResult, g: CompGraph, stream_of: dict[int, int]) -> str:
    """Complete-event timeline consumable by trace viewers."""
    rows = []
    for n in g.nodes:
        if n.id not in r.intervals:
            continue
        start, end = r.intervals[n.id]
        rows.append(
            {
                "name": n.label if n.label is not None else f"task{n.id}",
                "ph": "X",
                "ts": start,
                "dur": end - start,
                "tid": stream_of[n.id],
            }
        )
    rows.sort(key=lambda row: (row["ts"], row["tid"], row["name"]))
    return json.dumps(rows, separators=(",", ":"))
