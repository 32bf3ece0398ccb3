"""Static task graphs: validation, reachability, reduction, critical path.

A graph is a DAG of tasks. Each task carries an integer duration, a resource
demand (capacity units it occupies while running), and an optional list of
memory events (arena allocations and frees) replayed when the task is
compiled into a schedule.

All algorithms here are deterministic: node ids are processed in ascending
order, edge lists are kept sorted, and the canonical topological order is the
lexicographically smallest one (Kahn's algorithm with a min-heap).
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field

from .errors import (
    CycleDetected,
    DanglingEdge,
    DoubleFree,
    DuplicateEdge,
    DuplicateNodeId,
    FreeBeforeAlloc,
    SelfLoop,
)

Edge = tuple[int, int]

ALLOC = "alloc"
FREE = "free"


@dataclass(frozen=True)
class MemEvent:
    """One arena event attached to a task.

    kind "alloc" carries a positive byte size; kind "free" carries the index
    of the matching alloc within the same task's mem list.
    """

    kind: str
    size: int = 0
    ref: int = -1

    @staticmethod
    def alloc(size: int) -> "MemEvent":
        return MemEvent(ALLOC, size=size)

    @staticmethod
    def free(ref: int) -> "MemEvent":
        return MemEvent(FREE, ref=ref)


@dataclass(frozen=True)
class TaskNode:
    id: int
    duration: int = 1
    demand: int = 1
    label: str | None = None
    mem: tuple[MemEvent, ...] = ()


@dataclass(frozen=True)
class CompGraph:
    """Immutable task graph. Nodes sorted by id, edges sorted as pairs."""

    nodes: tuple[TaskNode, ...]
    edges: tuple[Edge, ...]

    @staticmethod
    def build(nodes, edges) -> "CompGraph":
        return CompGraph(
            tuple(sorted(nodes, key=lambda n: n.id)),
            tuple(sorted((int(u), int(v)) for u, v in edges)),
        )

    @property
    def node_ids(self) -> tuple[int, ...]:
        return tuple(n.id for n in self.nodes)

    def node(self, node_id: int) -> TaskNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def successors(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {n.id: [] for n in self.nodes}
        for u, v in self.edges:
            adj[u].append(v)
        return adj

    def predecessors(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {n.id: [] for n in self.nodes}
        for u, v in self.edges:
            adj[v].append(u)
        return adj

    def durations(self) -> dict[int, int]:
        return {n.id: n.duration for n in self.nodes}

    def demands(self) -> dict[int, int]:
        return {n.id: n.demand for n in self.nodes}

    def replace_edges(self, edges) -> "CompGraph":
        return CompGraph(self.nodes, tuple(sorted(edges)))


def validate_graph(g: CompGraph) -> None:
    """Check every structural invariant; raise the precise violation.

    Checks, in order: duplicate node ids, per-node mem event structure,
    self loops, dangling endpoints, duplicate edges, cycles (reported with a
    witness path).
    """
    seen_ids: set[int] = set()
    for n in g.nodes:
        if n.id in seen_ids:
            raise DuplicateNodeId(f"node id {n.id} declared twice")
        seen_ids.add(n.id)
        _validate_mem(n)

    for u, v in g.edges:
        if u == v:
            raise SelfLoop(f"edge {u}→{v}")
        if u not in seen_ids or v not in seen_ids:
            raise DanglingEdge(f"edge {u}→{v} references an undeclared node")
    dup = _first_duplicate(g.edges)
    if dup is not None:
        raise DuplicateEdge(f"edge {dup[0]}→{dup[1]} declared twice")

    cycle = _find_cycle(g)
    if cycle is not None:
        raise CycleDetected(cycle)


def _validate_mem(n: TaskNode) -> None:
    freed: set[int] = set()
    for i, ev in enumerate(n.mem):
        if ev.kind == ALLOC:
            if ev.size <= 0:
                raise ValueError(f"node {n.id} mem[{i}]: alloc size must be positive")
        elif ev.kind == FREE:
            if not (0 <= ev.ref < i) or n.mem[ev.ref].kind != ALLOC:
                raise FreeBeforeAlloc(
                    f"node {n.id} mem[{i}] frees index {ev.ref}, not an earlier alloc"
                )
            if ev.ref in freed:
                raise DoubleFree(f"node {n.id} mem[{i}] frees index {ev.ref} again")
            freed.add(ev.ref)
        else:
            raise ValueError(f"node {n.id} mem[{i}]: unknown kind {ev.kind!r}")


def _first_duplicate(edges) -> Edge | None:
    seen: set[Edge] = set()
    for e in edges:
        if e in seen:
            return e
        seen.add(e)
    return None


def _find_cycle(g: CompGraph) -> list[int] | None:
    """Iterative three-color DFS; returns a witness cycle as [v, ..., v]."""
    succ = g.successors()
    color: dict[int, int] = {n.id: 0 for n in g.nodes}  # 0 new, 1 active, 2 done
    parent: dict[int, int] = {}
    for root in sorted(color):
        if color[root]:
            continue
        stack: list[tuple[int, int]] = [(root, 0)]
        color[root] = 1
        while stack:
            node, i = stack[-1]
            if i < len(succ[node]):
                stack[-1] = (node, i + 1)
                nxt = succ[node][i]
                if color[nxt] == 1:
                    path = [node]
                    cur = node
                    while cur != nxt:
                        cur = parent[cur]
                        path.append(cur)
                    path.reverse()
                    path.append(nxt)
                    return path
                if color[nxt] == 0:
                    color[nxt] = 1
                    parent[nxt] = node
                    stack.append((nxt, 0))
            else:
                color[node] = 2
                stack.pop()
    return None


def topological_order(g: CompGraph) -> list[int]:
    """Canonical topological order: smallest available node id first."""
    succ = g.successors()
    indeg = {n.id: 0 for n in g.nodes}
    for _, v in g.edges:
        indeg[v] += 1
    ready = [i for i, d in sorted(indeg.items()) if d == 0]
    heapq.heapify(ready)
    out: list[int] = []
    while ready:
        u = heapq.heappop(ready)
        out.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    if len(out) != len(g.nodes):
        cycle = _find_cycle(g)
        raise CycleDetected(cycle if cycle else [])
    return out


@dataclass(frozen=True)
class ReachMatrix:
    """Boolean reachability relation over paths of length >= 1.

    Rows are bitmasks indexed by the rank of each node id in ascending order.
    """

    ids: tuple[int, ...]
    rows: tuple[int, ...]
    index: dict[int, int] = field(compare=False)

    def reaches(self, u: int, v: int) -> bool:
        return bool(self.rows[self.index[u]] >> self.index[v] & 1)

    def ordered(self, u: int, v: int) -> bool:
        """True when a path runs u to v or v to u."""
        return self.reaches(u, v) or self.reaches(v, u)

    def pairs(self) -> set[Edge]:
        out: set[Edge] = set()
        for i, row in enumerate(self.rows):
            u = self.ids[i]
            while row:
                low = row & -row
                out.add((u, self.ids[low.bit_length() - 1]))
                row ^= low
        return out


def transitive_closure(g: CompGraph) -> ReachMatrix:
    ids = tuple(sorted(n.id for n in g.nodes))
    index = {nid: i for i, nid in enumerate(ids)}
    succ = g.successors()
    rows = [0] * len(ids)
    for u in reversed(topological_order(g)):
        acc = 0
        for v in succ[u]:
            acc |= rows[index[v]] | (1 << index[v])
        rows[index[u]] = acc
    return ReachMatrix(ids, tuple(rows), index)


@dataclass(frozen=True)
class Meg:
    """The unique minimum equivalent graph of a validated DAG."""

    base: CompGraph
    edges: tuple[Edge, ...]

    def to_graph(self) -> CompGraph:
        return self.base.replace_edges(self.edges)


def minimum_equivalent_graph(g: CompGraph, reach: ReachMatrix | None = None) -> Meg:
    """Drop every edge that some length >= 2 path bypasses.

    An edge (u, v) is redundant exactly when some other direct successor w of
    u reaches v, which is the same as a bypass path through w.
    """
    if reach is None:
        reach = transitive_closure(g)
    succ = g.successors()
    kept: list[Edge] = []
    for u, v in g.edges:
        if not any(w != v and reach.reaches(w, v) for w in succ[u]):
            kept.append((u, v))
    return Meg(g, tuple(sorted(kept)))


def critical_path_time(g: CompGraph) -> int:
    """Maximum over directed paths of the path's total node duration."""
    if not g.nodes:
        return 0
    dur = g.durations()
    pred = g.predecessors()
    best: dict[int, int] = {}
    for v in topological_order(g):
        incoming = max((best[p] for p in pred[v]), default=0)
        best[v] = incoming + dur[v]
    return max(best.values())


# serialization

def graph_to_json(g: CompGraph) -> str:
    """Canonical compact JSON; loading then dumping is byte stable."""
    nodes = []
    for n in g.nodes:
        item: dict = {"id": n.id}
        if n.label is not None:
            item["label"] = n.label
        item["duration"] = n.duration
        item["demand"] = n.demand
        if n.mem:
            item["mem"] = [
                {ALLOC: ev.size} if ev.kind == ALLOC else {FREE: ev.ref}
                for ev in n.mem
            ]
        nodes.append(item)
    doc = {"nodes": nodes, "edges": [list(e) for e in g.edges]}
    return json.dumps(doc, separators=(",", ":"))


def graph_from_json(text: str) -> CompGraph:
    doc = json.loads(text)
    nodes = []
    for item in doc.get("nodes", []):
        mem = []
        for ev in item.get("mem", []):
            if ALLOC in ev:
                mem.append(MemEvent.alloc(int(ev[ALLOC])))
            elif FREE in ev:
                mem.append(MemEvent.free(int(ev[FREE])))
            else:
                raise ValueError(f"unknown mem event {ev!r}")
        nodes.append(
            TaskNode(
                id=int(item["id"]),
                duration=int(item.get("duration", 1)),
                demand=int(item.get("demand", 1)),
                label=item.get("label"),
                mem=tuple(mem),
            )
        )
    edges = [(int(u), int(v)) for u, v in doc.get("edges", [])]
    g = CompGraph(tuple(nodes), tuple(edges))
    validate_graph(g)
    return CompGraph.build(nodes, edges)


_PALETTE = (
    "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5",
    "#c49c94", "#f7b6d2", "#dbdb8d", "#9edae5", "#d9d9d9",
)


def graph_to_dot(
    g: CompGraph,
    stream_of: dict[int, int] | None = None,
    sync_edges=None,
) -> str:
    """DOT text. Streams color the nodes; sync edges render dashed."""
    syncs = set(sync_edges) if sync_edges else set()
    lines = ["digraph tasks {", "  rankdir=TB;"]
    for n in g.nodes:
        text = f"{n.label}\\n{n.id}" if n.label is not None else str(n.id)
        attrs = [f'label="{text}"']
        if stream_of is not None and n.id in stream_of:
            color = _PALETTE[stream_of[n.id] % len(_PALETTE)]
            attrs.append("style=filled")
            attrs.append(f'fillcolor="{color}"')
        lines.append(f"  {n.id} [{', '.join(attrs)}];")
    for u, v in g.edges:
        style = " [style=dashed]" if (u, v) in syncs else ""
        lines.append(f"  {u} -> {v}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
