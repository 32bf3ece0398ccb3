"""Stream assignment with provably minimal cross-stream synchronization.

The pipeline: reduce the DAG to its minimum equivalent graph, mirror the
reduced edges into a bipartite graph (left copy = sources, right copy =
destinations), take a maximum matching, then union matched pairs into
chains. Each chain becomes one stream, so the stream count is |V| - |M| and
exactly one incoming reduced edge per chained task is enforced for free by
stream FIFO order. Every other reduced edge needs an event, which is why the
sync plan has |E'| - |M| edges and no safe plan can be smaller.

Bipartite indices are the ranks of node ids in ascending order. The matching
scan is pinned (left vertices ascending, adjacency ascending) so results are
reproducible everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
import json

from .errors import InvalidMatching, NotMaxConcurrent, UnknownStream
from .graph import (
    CompGraph,
    Edge,
    Meg,
    ReachMatrix,
    minimum_equivalent_graph,
    topological_order,
    transitive_closure,
    validate_graph,
)


@dataclass(frozen=True)
class BipartiteGraph:
    left_size: int
    right_size: int
    edges: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class StreamAssignment:
    """Total map task id -> stream id, stream ids dense from 0.

    Stream ids are canonical: they appear in first-use order when walking the
    canonical topological order of the graph.
    """

    stream_of: dict[int, int]

    @property
    def num_streams(self) -> int:
        return max(self.stream_of.values(), default=-1) + 1

    def streams(self, order: list[int]) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_streams)]
        for v in order:
            out[self.stream_of[v]].append(v)
        return out


@dataclass(frozen=True)
class SyncPlan:
    edges: tuple[Edge, ...]

    def __len__(self) -> int:
        return len(self.edges)


def build_bipartite(meg: Meg) -> BipartiteGraph:
    ids = sorted(n.id for n in meg.base.nodes)
    index = {nid: i for i, nid in enumerate(ids)}
    edges = tuple(sorted((index[u], index[v]) for u, v in meg.edges))
    return BipartiteGraph(len(ids), len(ids), edges)


def maximum_matching(b: BipartiteGraph) -> Matching:
    """Kuhn's augmenting-path matching with a fixed scan order."""
    adj: list[list[int]] = [[] for _ in range(b.left_size)]
    for x, y in sorted(b.edges):
        adj[x].append(y)
    match_right: dict[int, int] = {}

    def augment(x: int, seen: set[int]) -> bool:
        for y in adj[x]:
            if y in seen:
                continue
            seen.add(y)
            if y not in match_right or augment(match_right[y], seen):
                match_right[y] = x
                return True
        return False

    for x in range(b.left_size):
        augment(x, set())
    pairs = tuple(sorted((x, y) for y, x in match_right.items()))
    return Matching(pairs)


def validate_matching(b: BipartiteGraph, m: Matching) -> None:
    edge_set = set(b.edges)
    xs: set[int] = set()
    ys: set[int] = set()
    for x, y in m.pairs:
        if (x, y) not in edge_set:
            raise InvalidMatching(f"pair ({x},{y}) is not a bipartite edge")
        if x in xs:
            raise InvalidMatching(f"left vertex {x} matched twice")
        if y in ys:
            raise InvalidMatching(f"right vertex {y} matched twice")
        xs.add(x)
        ys.add(y)


class _UnionFind:
    def __init__(self, items):
        self.parent = {i: i for i in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def assignment_from_matching(meg: Meg, m: Matching) -> StreamAssignment:
    """Union matched (source, destination) pairs into streams.

    Matched pairs chain tasks along reduced edges, so every stream is a path
    of the reduced graph. Labels are canonicalized by first use along the
    canonical topological order.
    """
    b = build_bipartite(meg)
    validate_matching(b, m)
    ids = sorted(n.id for n in meg.base.nodes)
    uf = _UnionFind(ids)
    for x, y in m.pairs:
        uf.union(ids[x], ids[y])
    return _canonical(meg.base, {v: uf.find(v) for v in ids})


def _canonical(g: CompGraph, root_of: dict[int, int]) -> StreamAssignment:
    label: dict[int, int] = {}
    stream_of: dict[int, int] = {}
    for v in topological_order(g):
        root = root_of[v]
        if root not in label:
            label[root] = len(label)
        stream_of[v] = label[root]
    return StreamAssignment(stream_of)


def is_max_concurrent(
    g: CompGraph, f: StreamAssignment, reach: ReachMatrix | None = None
) -> bool:
    """True when no two order-independent tasks share a stream."""
    if reach is None:
        reach = transitive_closure(g)
    by_stream: dict[int, list[int]] = {}
    for v, s in f.stream_of.items():
        by_stream.setdefault(s, []).append(v)
    for members in by_stream.values():
        for i, u in enumerate(members):
            for v in members[i + 1:]:
                if not reach.ordered(u, v):
                    return False
    return True


def min_sync_plan(meg: Meg, f: StreamAssignment) -> SyncPlan:
    """Keep every reduced edge except each task's unique same-stream parent.

    Requires maximum logical concurrency: two tasks on one stream are always
    ordered, so at most one reduced parent of a task can share its stream,
    and that edge is already serialized by stream FIFO order.
    """
    ids = [n.id for n in meg.base.nodes]
    for v in ids:
        if v not in f.stream_of:
            raise UnknownStream(f"task {v} has no stream")
    reach = transitive_closure(meg.base)
    if not is_max_concurrent(meg.base, f, reach):
        raise NotMaxConcurrent(
            "two order-independent tasks share a stream; the unique-parent "
            "rule does not apply"
        )
    dropped: set[Edge] = set()
    parent_seen: dict[int, int] = {}
    for u, v in meg.edges:
        if f.stream_of[u] == f.stream_of[v]:
            if v in parent_seen:
                raise NotMaxConcurrent(
                    f"task {v} has two same-stream parents {parent_seen[v]} and {u}"
                )
            parent_seen[v] = u
            dropped.add((u, v))
    return SyncPlan(tuple(e for e in meg.edges if e not in dropped))


def plan_is_safe(g: CompGraph, f: StreamAssignment, plan: SyncPlan) -> bool:
    """Every cross-stream edge must have some path covered by a sync edge.

    An edge (u, v) is covered by sync edge (a, b) when u reaches a and b
    reaches v (reflexively), i.e. some u-to-v path runs through (a, b).
    """
    reach = transitive_closure(g)

    def rstar(a: int, b: int) -> bool:
        return a == b or reach.reaches(a, b)

    edge_set = set(g.edges)
    covers = [e for e in plan.edges if e in edge_set]
    for u, v in g.edges:
        if f.stream_of[u] == f.stream_of[v]:
            continue
        if not any(rstar(u, a) and rstar(b, v) for a, b in covers):
            return False
    return True


def assign_streams(g: CompGraph) -> tuple[StreamAssignment, SyncPlan]:
    """Full pipeline: validate, reduce, match, partition, plan."""
    validate_graph(g)
    meg = minimum_equivalent_graph(g)
    m = maximum_matching(build_bipartite(meg))
    f = assignment_from_matching(meg, m)
    plan = min_sync_plan(meg, f)
    return f, plan


def fold_streams(
    g: CompGraph,
    f: StreamAssignment,
    plan: SyncPlan,
    max_streams: int,
) -> tuple[StreamAssignment, SyncPlan]:
    """Merge logical streams down to a physical budget.

    The max_streams busiest streams (total duration, ties by lower id) stay;
    the rest merge onto them round robin, lightest first. The full sync plan
    is kept: same-stream sync edges become redundant but never unsafe.
    """
    if max_streams < 1:
        raise ValueError("max_streams must be >= 1")
    if f.num_streams <= max_streams:
        return f, plan
    dur = g.durations()
    work: dict[int, int] = {s: 0 for s in range(f.num_streams)}
    for v, s in f.stream_of.items():
        work[s] += dur[v]
    by_load = sorted(work, key=lambda s: (-work[s], s))
    keep = sorted(by_load[:max_streams])
    fold = sorted(by_load[max_streams:], key=lambda s: (work[s], s))
    target: dict[int, int] = {s: s for s in keep}
    for i, s in enumerate(fold):
        target[s] = keep[i % len(keep)]
    merged = {v: target[s] for v, s in f.stream_of.items()}
    return _canonical(g, merged), plan


# serialization

def assignment_to_json(g: CompGraph, f: StreamAssignment, plan: SyncPlan, meg: Meg) -> str:
    order = topological_order(g)
    doc = {
        "streams": f.streams(order),
        "syncs": [list(e) for e in plan.edges],
        "meg_edges": [list(e) for e in meg.edges],
    }
    return json.dumps(doc, separators=(",", ":"))


def assignment_from_json(text: str, g: CompGraph) -> tuple[StreamAssignment, SyncPlan]:
    doc = json.loads(text)
    known = {n.id for n in g.nodes}
    stream_of: dict[int, int] = {}
    for sid, members in enumerate(doc["streams"]):
        for v in members:
            v = int(v)
            if v not in known:
                raise UnknownStream(f"stream {sid} names unknown task {v}")
            stream_of[v] = sid
    for n in g.nodes:
        if n.id not in stream_of:
            raise UnknownStream(f"task {n.id} has no stream")
    plan = SyncPlan(tuple(sorted((int(u), int(v)) for u, v in doc.get("syncs", []))))
    return StreamAssignment(stream_of), plan
