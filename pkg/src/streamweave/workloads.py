"""Seeded generators for benchmark task graphs and their cost models.

Every generator is a pure function of its spec: the same spec (seed
included) always yields the identical graph, bit for bit, because all
randomness comes from the package's own fixed-constant generator rather
than the host's.

Draw order is part of the contract. Topology draws happen first (layer by
layer, source node ascending, target node ascending, then one repair draw
per isolated node in id order), then durations are drawn one per node in id
order from the duration model's own generator.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidSpec
from .graph import CompGraph, Edge, TaskNode, validate_graph
from .rng import SplitMix64


@dataclass(frozen=True)
class Chain:
    n: int


@dataclass(frozen=True)
class ForkJoin:
    width: int


@dataclass(frozen=True)
class CellStack:
    cells: int
    branches_per_cell: int


@dataclass(frozen=True)
class LayeredRandom:
    layers: int
    width: int
    edge_prob: float
    seed: int


Topology = Chain | ForkJoin | CellStack | LayeredRandom


@dataclass(frozen=True)
class Constant:
    value: int


@dataclass(frozen=True)
class Uniform:
    lo: int
    hi: int
    seed: int


DurationModel = Constant | Uniform


@dataclass(frozen=True)
class ProportionalToDuration:
    divisor: int


DemandModel = Constant | ProportionalToDuration


@dataclass(frozen=True)
class WorkloadSpec:
    kind: Topology
    duration_model: DurationModel = Constant(1)
    demand_model: DemandModel = Constant(1)


def _check(spec: WorkloadSpec) -> None:
    k = spec.kind
    if isinstance(k, Chain):
        if k.n < 1:
            raise InvalidSpec("chain length must be at least 1")
    elif isinstance(k, ForkJoin):
        if k.width < 1:
            raise InvalidSpec("fork-join width must be at least 1")
    elif isinstance(k, CellStack):
        if k.cells < 1 or k.branches_per_cell < 1:
            raise InvalidSpec("cell counts must be at least 1")
    elif isinstance(k, LayeredRandom):
        if k.layers < 1 or k.width < 1:
            raise InvalidSpec("layer counts must be at least 1")
        if not 0.0 <= k.edge_prob <= 1.0:
            raise InvalidSpec("edge_prob must lie in [0, 1]")
    else:
        raise InvalidSpec(f"unknown topology {k!r}")
    d = spec.duration_model
    if isinstance(d, Constant):
        if d.value < 0:
            raise InvalidSpec("duration must be non-negative")
    elif isinstance(d, Uniform):
        if not 0 <= d.lo <= d.hi:
            raise InvalidSpec("uniform bounds must satisfy 0 <= lo <= hi")
    else:
        raise InvalidSpec(f"unknown duration model {d!r}")
    u = spec.demand_model
    if isinstance(u, Constant):
        if u.value < 1:
            raise InvalidSpec("demand must be at least 1")
    elif isinstance(u, ProportionalToDuration):
        if u.divisor < 1:
            raise InvalidSpec("demand divisor must be at least 1")
    else:
        raise InvalidSpec(f"unknown demand model {u!r}")


def _topology(kind: Topology) -> tuple[int, list[Edge]]:
    """Node count plus edge list; node ids are dense from 0."""
    if isinstance(kind, Chain):
        return kind.n, [(i, i + 1) for i in range(kind.n - 1)]
    if isinstance(kind, ForkJoin):
        k = kind.width
        edges: list[Edge] = []
        for b in range(1, k + 1):
            edges.append((0, b))
            edges.append((b, k + 1))
        return k + 2, edges
    if isinstance(kind, CellStack):
        b = kind.branches_per_cell
        edges = []
        n = 0
        prev_join = None
        for _ in range(kind.cells):
            fork = n
            join = n + b + 1
            if prev_join is not None:
                edges.append((prev_join, fork))
            for i in range(1, b + 1):
                edges.append((fork, fork + i))
                edges.append((fork + i, join))
            prev_join = join
            n = join + 1
        return n, edges
    assert isinstance(kind, LayeredRandom)
    rng = SplitMix64(kind.seed)
    w = kind.width
    edges = []
    for layer in range(1, kind.layers):
        base, prev = layer * w, (layer - 1) * w
        for u in range(prev, prev + w):
            for v in range(base, base + w):
                if rng.chance(kind.edge_prob):
                    edges.append((u, v))
    # keep the graph connected: any node past layer 0 left with no parent
    # gets one edge from a drawn node of the previous layer
    has_parent = {v for _, v in edges}
    for layer in range(1, kind.layers):
        base, prev = layer * w, (layer - 1) * w
        for v in range(base, base + w):
            if v not in has_parent:
                edges.append((prev + rng.below(w), v))
    return kind.layers * w, edges


def generate(spec: WorkloadSpec) -> CompGraph:
    _check(spec)
    count, edges = _topology(spec.kind)

    d = spec.duration_model
    if isinstance(d, Constant):
        durations = [d.value] * count
    else:
        rng = SplitMix64(d.seed)
        durations = [rng.randint(d.lo, d.hi) for _ in range(count)]

    u = spec.demand_model
    if isinstance(u, Constant):
        demands = [u.value] * count
    else:
        demands = [max(1, dur // u.divisor) for dur in durations]

    nodes = [
        TaskNode(id=i, duration=durations[i], demand=demands[i])
        for i in range(count)
    ]
    g = CompGraph.build(nodes, edges)
    validate_graph(g)
    return g


def workload_from_obj(obj: dict, seed_override: int | None = None) -> WorkloadSpec:
    """Build a spec from plain config data (already-parsed TOML or JSON)."""
    try:
        kind_name = obj["kind"]
    except (KeyError, TypeError):
        raise InvalidSpec("workload config needs a 'kind'") from None
    kind: Topology
    if kind_name == "chain":
        kind = Chain(int(obj.get("n", 1)))
    elif kind_name == "fork_join":
        kind = ForkJoin(int(obj.get("width", 1)))
    elif kind_name == "cell_stack":
        kind = CellStack(int(obj.get("cells", 1)), int(obj.get("branches", 1)))
    elif kind_name == "layered_random":
        seed = int(obj.get("seed", 0)) if seed_override is None else seed_override
        kind = LayeredRandom(
            int(obj.get("layers", 1)),
            int(obj.get("width", 1)),
            float(obj.get("edge_prob", 0.5)),
            seed,
        )
    else:
        raise InvalidSpec(f"unknown workload kind {kind_name!r}")

    dur_obj = obj.get("duration", {"constant": 1})
    if "constant" in dur_obj:
        duration: DurationModel = Constant(int(dur_obj["constant"]))
    elif "uniform" in dur_obj:
        lo, hi, seed = dur_obj["uniform"]
        if seed_override is not None:
            seed = seed_override
        duration = Uniform(int(lo), int(hi), int(seed))
    else:
        raise InvalidSpec(f"unknown duration model {dur_obj!r}")

    dem_obj = obj.get("demand", {"constant": 1})
    if "constant" in dem_obj:
        demand: DemandModel = Constant(int(dem_obj["constant"]))
    elif "proportional" in dem_obj:
        demand = ProportionalToDuration(int(dem_obj["proportional"]))
    else:
        raise InvalidSpec(f"unknown demand model {dem_obj!r}")

    return WorkloadSpec(kind=kind, duration_model=duration, demand_model=demand)
