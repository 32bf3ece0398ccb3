"""Ahead-of-time schedule capture: stream op lists plus an arena layout.

A schedule is captured once by walking the graph in canonical topological
order and recording, per stream, the exact FIFO of operations a replayer
submits later: task launches, event records, event waits. Cross-stream sync
edges each get one event; the record lands immediately after the source
task's launch and the wait immediately before the destination task's launch.

Memory is pre-reserved in one arena. Walking the same capture order, each
alloc grabs the lowest offset where it fits among live blocks (first fit);
frees retire blocks so later allocs can reuse their space. The arena total
is the high-water mark of that walk.
"""

from __future__ import annotations

from dataclasses import dataclass
import json

from .assign import StreamAssignment, SyncPlan, plan_is_safe
from .errors import DoubleFree, FreeBeforeAlloc, UnknownStream, UnsafePlan
from .graph import ALLOC, FREE, CompGraph, MemEvent, topological_order

LAUNCH = "launch"
RECORD = "record"
WAIT = "wait"

BlockKey = tuple[int, int]  # (task id, index into that task's mem list)


@dataclass(frozen=True)
class StreamOp:
    kind: str  # "launch" | "record" | "wait"
    arg: int   # task id for launches, event id otherwise
    position: int  # index within the stream's FIFO


@dataclass(frozen=True)
class ArenaLayout:
    total: int
    blocks: dict[BlockKey, tuple[int, int]]  # key -> (offset, size)


@dataclass(frozen=True)
class TaskSchedule:
    streams: tuple[tuple[StreamOp, ...], ...]
    event_count: int
    arena: ArenaLayout
    task_args: dict[int, tuple[int, ...]]  # task id -> arena offsets of its allocs
    order: tuple[int, ...]  # capture order as a sequence of stream ids


def pre_run(g: CompGraph, f: StreamAssignment, plan: SyncPlan) -> TaskSchedule:
    """Capture the schedule for a safe (assignment, plan) pair."""
    ids = [n.id for n in g.nodes]
    for v in ids:
        if v not in f.stream_of:
            raise UnknownStream(f"task {v} has no stream")
    n_streams = f.num_streams
    used = sorted(set(f.stream_of.values()))
    if used != list(range(n_streams)):
        raise UnknownStream(f"stream ids are not dense from 0: {used}")

    edge_set = set(g.edges)
    for e in plan.edges:
        if e not in edge_set:
            raise UnsafePlan(f"sync edge {e[0]}→{e[1]} is not a graph edge")
    if not plan_is_safe(g, f, plan):
        raise UnsafePlan("plan leaves a cross-stream dependency uncovered")

    event_of = {e: i for i, e in enumerate(sorted(plan.edges))}
    waits_of: dict[int, list[int]] = {v: [] for v in ids}
    records_of: dict[int, list[int]] = {v: [] for v in ids}
    for e in sorted(plan.edges):
        u, v = e
        records_of[u].append(event_of[e])
        waits_of[v].append(event_of[e])

    streams: list[list[StreamOp]] = [[] for _ in range(n_streams)]
    capture: list[int] = []

    def emit(sid: int, kind: str, arg: int) -> None:
        streams[sid].append(StreamOp(kind, arg, len(streams[sid])))
        capture.append(sid)

    walk = topological_order(g)
    trace: list[tuple[BlockKey, MemEvent]] = []
    for v in walk:
        sid = f.stream_of[v]
        for ev in waits_of[v]:
            emit(sid, WAIT, ev)
        emit(sid, LAUNCH, v)
        for ev in records_of[v]:
            emit(sid, RECORD, ev)
        for i, mev in enumerate(g.node(v).mem):
            key = (v, i) if mev.kind == ALLOC else (v, mev.ref)
            trace.append((key, mev))

    arena = reserve_arena(trace)
    task_args: dict[int, tuple[int, ...]] = {}
    for v in walk:
        offsets = [
            arena.blocks[(v, i)][0]
            for i, mev in enumerate(g.node(v).mem)
            if mev.kind == ALLOC
        ]
        task_args[v] = tuple(offsets)

    return TaskSchedule(
        streams=tuple(tuple(s) for s in streams),
        event_count=len(event_of),
        arena=arena,
        task_args=task_args,
        order=tuple(capture),
    )


def reserve_arena(trace) -> ArenaLayout:
    """First-fit reservation over a linear alloc/free trace.

    ``trace`` is an ordered sequence of (key, MemEvent) pairs; a free's key
    names the alloc it retires. Blocks live from their alloc position to
    their free position (or forever); two blocks may share offsets only when
    their lifetimes do not overlap. Total is the high-water extent.
    """
    live: dict[BlockKey, tuple[int, int]] = {}
    placed: dict[BlockKey, tuple[int, int]] = {}
    total = 0
    for key, ev in trace:
        if ev.kind == ALLOC:
            if key in placed:
                raise ValueError(f"block {key} allocated twice")
            offset = _first_fit(live.values(), ev.size)
            live[key] = (offset, ev.size)
            placed[key] = (offset, ev.size)
            total = max(total, offset + ev.size)
        elif ev.kind == FREE:
            if key not in placed:
                raise FreeBeforeAlloc(f"free of {key} before its alloc")
            if key not in live:
                raise DoubleFree(f"block {key} freed twice")
            del live[key]
        else:
            raise ValueError(f"unknown mem event kind {ev.kind!r}")
    return ArenaLayout(total=total, blocks=placed)


def _first_fit(live_blocks, size: int) -> int:
    taken = sorted(live_blocks)
    offset = 0
    for start, length in taken:
        if offset + size <= start:
            break
        offset = max(offset, start + length)
    return offset


def replay_order(ts: TaskSchedule) -> list[tuple[int, StreamOp]]:
    """The flat submission sequence, exactly as captured."""
    cursors = [0] * len(ts.streams)
    out: list[tuple[int, StreamOp]] = []
    for sid in ts.order:
        out.append((sid, ts.streams[sid][cursors[sid]]))
        cursors[sid] += 1
    return out


# serialization

def _op_to_obj(op: StreamOp) -> dict:
    return {op.kind: op.arg}


def schedule_to_json(ts: TaskSchedule) -> str:
    doc = {
        "streams": [[_op_to_obj(op) for op in s] for s in ts.streams],
        "events": ts.event_count,
        "arena": {
            "total": ts.arena.total,
            "blocks": {
                f"{k[0]}:{k[1]}": list(v)
                for k, v in sorted(ts.arena.blocks.items())
            },
        },
        "task_args": {str(t): list(v) for t, v in sorted(ts.task_args.items())},
        "order": list(ts.order),
    }
    return json.dumps(doc, separators=(",", ":"))


def schedule_from_json(text: str) -> TaskSchedule:
    doc = json.loads(text)
    streams = []
    for ops in doc["streams"]:
        parsed = []
        for i, obj in enumerate(ops):
            (kind, arg), = obj.items()
            if kind not in (LAUNCH, RECORD, WAIT):
                raise ValueError(f"unknown op {obj!r}")
            parsed.append(StreamOp(kind, int(arg), i))
        streams.append(tuple(parsed))
    blocks: dict[BlockKey, tuple[int, int]] = {}
    for key, span in doc["arena"]["blocks"].items():
        node_s, idx_s = key.split(":")
        blocks[(int(node_s), int(idx_s))] = (int(span[0]), int(span[1]))
    return TaskSchedule(
        streams=tuple(streams),
        event_count=int(doc.get("events", 0)),
        arena=ArenaLayout(total=int(doc["arena"]["total"]), blocks=blocks),
        task_args={
            int(t): tuple(int(x) for x in v)
            for t, v in doc.get("task_args", {}).items()
        },
        order=tuple(int(s) for s in doc.get("order", [])),
    )
