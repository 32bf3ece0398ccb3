"""Stream assignment, schedule capture, and simulation for task graphs.

The pipeline: validate a task DAG, reduce it to its minimum equivalent
graph, assign tasks to streams via bipartite matching so that independent
tasks never share a stream, derive the minimal set of cross-stream event
syncs, capture a replayable per-stream schedule with a preplanned memory
arena, and simulate execution to measure scheduling overhead and speedup.
"""

from .errors import (
    CapacityExceeded,
    CycleDetected,
    DanglingEdge,
    DeadlockDetected,
    DoubleFree,
    DuplicateEdge,
    DuplicateNodeId,
    EmptyRun,
    FreeBeforeAlloc,
    GraphError,
    InvalidMatching,
    InvalidSpec,
    NotMaxConcurrent,
    SelfLoop,
    StreamWeaveError,
    TooLarge,
    UnknownStream,
    UnsafePlan,
)
from .graph import (
    CompGraph,
    Edge,
    MemEvent,
    Meg,
    ReachMatrix,
    TaskNode,
    critical_path_time,
    graph_from_json,
    graph_to_dot,
    graph_to_json,
    minimum_equivalent_graph,
    topological_order,
    transitive_closure,
    validate_graph,
)
from .assign import (
    BipartiteGraph,
    Matching,
    StreamAssignment,
    SyncPlan,
    assign_streams,
    assignment_from_json,
    assignment_to_json,
    build_bipartite,
    fold_streams,
    is_max_concurrent,
    maximum_matching,
    min_sync_plan,
    plan_is_safe,
)
from .oracle import (
    OracleReport,
    enumerate_assignments,
    min_syncs_brute,
    oracle_plan_is_safe,
    verify_given,
    verify_optimal,
)
from .schedule import (
    ArenaLayout,
    StreamOp,
    TaskSchedule,
    pre_run,
    replay_order,
    reserve_arena,
    schedule_from_json,
    schedule_to_json,
)
from .sim import (
    MetricsReport,
    SimConfig,
    SimResult,
    SubmitMode,
    chrome_trace,
    metrics,
    run_framework_mode,
    sim_result_to_json,
    simulate,
    speedup,
)
from .workloads import (
    CellStack,
    Chain,
    Constant,
    ForkJoin,
    LayeredRandom,
    ProportionalToDuration,
    Uniform,
    WorkloadSpec,
    generate,
)
from .compare import CompareReport, ModeResult, compare_modes, compare_to_json, render_table
from .rng import SplitMix64

__version__ = "0.1.0"

__all__ = [
    "ArenaLayout",
    "BipartiteGraph",
    "CapacityExceeded",
    "CellStack",
    "Chain",
    "CompGraph",
    "CompareReport",
    "Constant",
    "CycleDetected",
    "DanglingEdge",
    "DeadlockDetected",
    "DoubleFree",
    "DuplicateEdge",
    "DuplicateNodeId",
    "Edge",
    "EmptyRun",
    "ForkJoin",
    "FreeBeforeAlloc",
    "GraphError",
    "InvalidMatching",
    "InvalidSpec",
    "LayeredRandom",
    "Matching",
    "MemEvent",
    "Meg",
    "MetricsReport",
    "ModeResult",
    "NotMaxConcurrent",
    "OracleReport",
    "ProportionalToDuration",
    "ReachMatrix",
    "SelfLoop",
    "SimConfig",
    "SimResult",
    "SplitMix64",
    "StreamAssignment",
    "StreamOp",
    "StreamWeaveError",
    "SubmitMode",
    "SyncPlan",
    "TaskNode",
    "TaskSchedule",
    "TooLarge",
    "Uniform",
    "UnknownStream",
    "UnsafePlan",
    "WorkloadSpec",
    "assign_streams",
    "assignment_from_json",
    "assignment_to_json",
    "build_bipartite",
    "chrome_trace",
    "compare_modes",
    "compare_to_json",
    "critical_path_time",
    "enumerate_assignments",
    "fold_streams",
    "generate",
    "graph_from_json",
    "graph_to_dot",
    "graph_to_json",
    "is_max_concurrent",
    "maximum_matching",
    "metrics",
    "min_sync_plan",
    "min_syncs_brute",
    "minimum_equivalent_graph",
    "oracle_plan_is_safe",
    "plan_is_safe",
    "pre_run",
    "render_table",
    "replay_order",
    "reserve_arena",
    "run_framework_mode",
    "schedule_from_json",
    "schedule_to_json",
    "sim_result_to_json",
    "simulate",
    "speedup",
    "topological_order",
    "transitive_closure",
    "validate_graph",
    "verify_given",
    "verify_optimal",
]
