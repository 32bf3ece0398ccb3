"""Brute-force verifiers for assignments and sync plans.

Everything here is deliberately independent of the production pipeline: the
safety predicate walks paths edge by edge with a dynamic program instead of
the pair-cover shortcut, assignments are enumerated as raw set partitions,
and the minimum plan is found by exact search over edge subsets. Size guards
raise TooLarge rather than letting an exponential search run away.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import json

from .assign import (
    BipartiteGraph,
    Matching,
    StreamAssignment,
    assign_streams,
)
from .errors import TooLarge
from .graph import CompGraph, Edge, topological_order, transitive_closure

MAX_ENUM_NODES = 10
MAX_PLAN_EDGES = 20
MAX_VERIFY_NODES = 7


def oracle_plan_is_safe(g: CompGraph, f: StreamAssignment, plan) -> bool:
    """Path-walking safety check.

    For every edge (u, v) whose endpoints sit on different streams, some
    directed u-to-v path must contain a plan edge. Paths are quantified by a
    forward DP from u: ``synced[w]`` becomes true once any path u..w crosses
    a plan edge.
    """
    plan_edges = set(plan.edges if hasattr(plan, "edges") else plan)
    order = topological_order(g)
    pred = g.predecessors()
    for u, v in g.edges:
        if f.stream_of[u] == f.stream_of[v]:
            continue
        if not _synced_path_exists(order, pred, plan_edges, u, v):
            return False
    return True


def _synced_path_exists(order, pred, plan_edges, u: int, v: int) -> bool:
    arrived = {u}
    synced: set[int] = set()
    walking = False
    for w in order:
        if w == u:
            walking = True
            continue
        if not walking:
            continue
        for x in pred[w]:
            if x in arrived:
                arrived.add(w)
                if x in synced or (x, w) in plan_edges:
                    synced.add(w)
        if w == v:
            return v in synced
    return False


@lru_cache(maxsize=128)
def _machinery(g: CompGraph):
    """Per-graph tables: edge index and per-edge constraint cover masks.

    cover[i] has bit j set when planning a sync on edge i alone satisfies
    the path condition for edge j. Built from the DP predicate so the mask
    route and the direct route cannot drift apart.
    """
    order = topological_order(g)
    pred = g.predecessors()
    edges = list(g.edges)
    cover = []
    for e in edges:
        plan_edges = {e}
        mask = 0
        for j, (u, v) in enumerate(edges):
            if _synced_path_exists(order, pred, plan_edges, u, v):
                mask |= 1 << j
        cover.append(mask)
    return edges, cover


def _need_mask(edges, f: StreamAssignment) -> int:
    mask = 0
    for j, (u, v) in enumerate(edges):
        if f.stream_of[u] != f.stream_of[v]:
            mask |= 1 << j
    return mask


def _min_cover(need: int, cands: list[int], bound: int | None) -> int:
    """Exact minimum number of candidate masks whose union covers need."""
    if need == 0:
        return 0
    useful = sorted({c & need for c in cands if c & need}, key=lambda m: -bin(m).count("1"))
    kept: list[int] = []
    for c in useful:
        if not any(c & ~k == 0 for k in kept):
            kept.append(c)
    # greedy upper bound
    uncov = need
    greedy = 0
    while uncov:
        best_c = max(kept, key=lambda m: bin(m & uncov).count("1"))
        if not best_c & uncov:
            break
        uncov &= ~best_c
        greedy += 1
    best = greedy
    if bound is not None:
        best = min(best, bound)
    by_bit: dict[int, list[int]] = {}
    for c in kept:
        m = c & need
        while m:
            low = m & -m
            by_bit.setdefault(low, []).append(c)
            m ^= low
    max_pc = max(bin(c).count("1") for c in kept)

    def dfs(uncov: int, size: int) -> None:
        nonlocal best
        if uncov == 0:
            if size < best:
                best = size
            return
        lb = (bin(uncov).count("1") + max_pc - 1) // max_pc
        if size + lb >= best:
            return
        pick_opts = None
        m = uncov
        while m:
            low = m & -m
            opts = by_bit.get(low, ())
            if pick_opts is None or len(opts) < len(pick_opts):
                pick_opts = opts
            m ^= low
        for c in pick_opts or ():
            dfs(uncov & ~c, size + 1)

    dfs(need, 0)
    return best


def min_syncs_brute(g: CompGraph, f: StreamAssignment, *, bound: int | None = None) -> int:
    """Smallest safe plan size for f, by exact subset search over edges.

    With ``bound`` given the search may stop once no plan smaller than the
    bound exists and return the bound itself; callers only use this when
    taking a minimum across assignments.
    """
    if len(g.edges) > MAX_PLAN_EDGES:
        raise TooLarge(f"{len(g.edges)} edges exceeds the {MAX_PLAN_EDGES}-edge plan search cap")
    edges, cover = _machinery(g)
    return _min_cover(_need_mask(edges, f), cover, bound)


def _partitions(order: list[int]):
    """Restricted-growth enumeration; labels are first-use canonical."""
    n = len(order)
    if n == 0:
        yield {}
        return
    a = [0] * n
    maxes = [0] * n
    while True:
        yield {order[i]: a[i] for i in range(n)}
        i = n - 1
        while i > 0 and a[i] == maxes[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        maxes[i] = max(maxes[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            maxes[j] = maxes[i]


def _enumerate(g: CompGraph) -> tuple[list[StreamAssignment], int]:
    order = topological_order(g)
    reach = transitive_closure(g)
    rank = {v: i for i, v in enumerate(order)}
    ordered = [[False] * len(order) for _ in order]
    for i, u in enumerate(order):
        for j, v in enumerate(order):
            if i != j:
                ordered[i][j] = reach.ordered(u, v)
    out: list[StreamAssignment] = []
    checked = 0
    for part in _partitions(order):
        checked += 1
        blocks: dict[int, list[int]] = {}
        for v, s in part.items():
            blocks.setdefault(s, []).append(rank[v])
        ok = True
        for members in blocks.values():
            for i, ru in enumerate(members):
                for rv in members[i + 1:]:
                    if not ordered[ru][rv]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            out.append(StreamAssignment(part))
    return out, checked


def enumerate_assignments(g: CompGraph) -> list[StreamAssignment]:
    """All maximum-logical-concurrency assignments, canonically labeled."""
    if len(g.nodes) > MAX_ENUM_NODES:
        raise TooLarge(
            f"{len(g.nodes)} nodes exceeds the {MAX_ENUM_NODES}-node enumeration cap"
        )
    return _enumerate(g)[0]


def enumerate_matchings(b: BipartiteGraph) -> list[Matching]:
    """Every matching of b, the empty one included."""
    edges = sorted(b.edges)
    out: list[Matching] = []

    def rec(i: int, used_x: set[int], used_y: set[int], cur: list) -> None:
        if i == len(edges):
            out.append(Matching(tuple(cur)))
            return
        x, y = edges[i]
        rec(i + 1, used_x, used_y, cur)
        if x not in used_x and y not in used_y:
            used_x.add(x)
            used_y.add(y)
            cur.append((x, y))
            rec(i + 1, used_x, used_y, cur)
            cur.pop()
            used_x.discard(x)
            used_y.discard(y)

    rec(0, set(), set(), [])
    return out


@dataclass(frozen=True)
class OracleReport:
    optimal: bool
    algo_syncs: int
    oracle_min: int
    assignments_checked: int
    plan_safe: bool

    def to_json(self) -> str:
        doc = {
            "optimal": self.optimal,
            "algo_syncs": self.algo_syncs,
            "oracle_min": self.oracle_min,
            "assignments_checked": self.assignments_checked,
        }
        return json.dumps(doc, separators=(",", ":"))


def verify_optimal(g: CompGraph) -> OracleReport:
    """Compare the pipeline's sync count against the exhaustive minimum.

    Counts every set partition enumerated; the minimum is taken over the
    maximum-concurrency ones only (others cannot be produced or accepted).
    """
    if len(g.nodes) > MAX_VERIFY_NODES:
        raise TooLarge(
            f"{len(g.nodes)} nodes exceeds the {MAX_VERIFY_NODES}-node verification cap"
        )
    f_algo, plan = assign_streams(g)
    algo = len(plan.edges)
    candidates, checked = _enumerate(g)
    best: int | None = None
    for f in candidates:
        best = min_syncs_brute(g, f, bound=best)
    oracle_min = 0 if best is None else best
    safe = oracle_plan_is_safe(g, f_algo, plan)
    return OracleReport(
        optimal=(algo == oracle_min) and safe,
        algo_syncs=algo,
        oracle_min=oracle_min,
        assignments_checked=checked,
        plan_safe=safe,
    )


def verify_given(g: CompGraph, f: StreamAssignment, plan) -> OracleReport:
    """Same report, but for a caller-supplied assignment and plan."""
    if len(g.nodes) > MAX_VERIFY_NODES:
        raise TooLarge(
            f"{len(g.nodes)} nodes exceeds the {MAX_VERIFY_NODES}-node verification cap"
        )
    algo = len(tuple(plan.edges if hasattr(plan, "edges") else plan))
    candidates, checked = _enumerate(g)
    best: int | None = None
    for cand in candidates:
        best = min_syncs_brute(g, cand, bound=best)
    oracle_min = 0 if best is None else best
    safe = oracle_plan_is_safe(g, f, plan)
    return OracleReport(
        optimal=(algo == oracle_min) and safe,
        algo_syncs=algo,
        oracle_min=oracle_min,
        assignments_checked=checked,
        plan_safe=safe,
    )
