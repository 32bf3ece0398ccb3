"""Command-line front end for the full pipeline.

Subcommands: gen, assign, compile, simulate, compare, verify, export-dot,
export-trace. One TOML or JSON config file can hold a "workload" table
(consumed by gen) and a "sim" table (consumed by simulate, compare,
export-trace); individual flags always win over config values.

Exit codes: 0 success, 2 validation failure, 3 I/O failure, 4 input too
large for the exhaustive checker, 5 optimality violation found by verify.
Every failure prints a single diagnostic line to stderr shaped
"ErrorName: detail".

The STREAMWEAVE_SEED environment variable, when set, overrides every
workload seed (topology and duration alike).
"""

from __future__ import annotations

import argparse
import json
import os
from pathlib import Path
import sys

from .assign import (
    StreamAssignment,
    assign_streams,
    assignment_from_json,
    assignment_to_json,
)
from .errors import StreamWeaveError, TooLarge
from .graph import (
    CompGraph,
    graph_from_json,
    graph_to_dot,
    graph_to_json,
    minimum_equivalent_graph,
)
from .oracle import verify_given, verify_optimal
from .compare import compare_modes, compare_to_json, render_table
from .schedule import LAUNCH, TaskSchedule, pre_run, schedule_from_json, schedule_to_json
from .sim import SimConfig, chrome_trace, run_framework_mode, sim_result_to_json, simulate
from .workloads import generate, workload_from_obj

SEED_ENV = "STREAMWEAVE_SEED"


def _load_toml(data: bytes) -> dict:
    try:
        import tomllib
    except ImportError:  # 3.10
        import tomli as tomllib
    return tomllib.loads(data.decode())


def _load_config(path: str) -> dict:
    p = Path(path)
    data = p.read_bytes()
    if p.suffix == ".toml":
        return _load_toml(data)
    if p.suffix == ".json":
        return json.loads(data)
    try:
        return json.loads(data)
    except ValueError:
        return _load_toml(data)


def _load_graph(path: str) -> CompGraph:
    return graph_from_json(Path(path).read_text())


def _emit(text: str, out: str | None, stats: str | None = None) -> int:
    """Write the payload to -o (stats on stdout) or stdout (stats on stderr)."""
    if out is not None:
        Path(out).write_text(text + "\n")
        if stats is not None:
            print(stats)
    else:
        if stats is not None:
            print(stats, file=sys.stderr)
        print(text)
    return 0


def _seed_override() -> int | None:
    raw = os.environ.get(SEED_ENV)
    return int(raw) if raw not in (None, "") else None


def _sim_config(args) -> SimConfig:
    base: dict = {}
    if getattr(args, "config", None):
        base = dict(_load_config(args.config).get("sim", {}))
    if args.capacity is not None:
        base["capacity"] = args.capacity
    if args.overhead_framework is not None:
        base["overhead_framework"] = args.overhead_framework
    if args.overhead_replay is not None:
        base["overhead_replay"] = args.overhead_replay
    capacity = base.get("capacity")
    return SimConfig(
        capacity=None if capacity in (None, 0) else int(capacity),
        overhead_framework=int(base.get("overhead_framework", 0)),
        overhead_replay=int(base.get("overhead_replay", 0)),
    )


def _load_assignment(args, g: CompGraph):
    if getattr(args, "assignment", None):
        return assignment_from_json(Path(args.assignment).read_text(), g)
    return assign_streams(g)


def cmd_gen(args) -> int:
    obj: dict = {}
    if args.config:
        obj = dict(_load_config(args.config).get("workload", {}))
    if args.kind:
        obj["kind"] = args.kind
    for key, value in (
        ("n", args.n),
        ("width", args.width),
        ("cells", args.cells),
        ("branches", args.branches),
        ("layers", args.layers),
        ("edge_prob", args.edge_prob),
        ("seed", args.seed),
    ):
        if value is not None:
            obj[key] = value
    if args.duration is not None:
        obj["duration"] = {"constant": args.duration}
    if args.duration_uniform is not None:
        obj["duration"] = {"uniform": list(args.duration_uniform)}
    if args.demand is not None:
        obj["demand"] = {"constant": args.demand}
    if args.demand_proportional is not None:
        obj["demand"] = {"proportional": args.demand_proportional}
    spec = workload_from_obj(obj, _seed_override())
    return _emit(graph_to_json(generate(spec)), args.out)


def cmd_assign(args) -> int:
    g = _load_graph(args.graph)
    meg = minimum_equivalent_graph(g)
    f, plan = assign_streams(g)
    matched = len(meg.edges) - len(plan)
    stats = (
        f"streams={f.num_streams} syncs={len(plan)}"
        f" E'={len(meg.edges)} M={matched}"
    )
    return _emit(assignment_to_json(g, f, plan, meg), args.out, stats)


def cmd_compile(args) -> int:
    g = _load_graph(args.graph)
    f, plan = _load_assignment(args, g)
    return _emit(schedule_to_json(pre_run(g, f, plan)), args.out)


def cmd_simulate(args) -> int:
    g = _load_graph(args.graph)
    cfg = _sim_config(args)
    if args.mode == "framework":
        f, plan = _load_assignment(args, g)
        result = run_framework_mode(g, f, plan, cfg)
    else:
        if args.schedule:
            ts = schedule_from_json(Path(args.schedule).read_text())
        else:
            f, plan = _load_assignment(args, g)
            ts = pre_run(g, f, plan)
        result = simulate(ts, g, cfg)
    return _emit(sim_result_to_json(result), args.out)


def cmd_compare(args) -> int:
    g = _load_graph(args.graph)
    rep = compare_modes(g, _sim_config(args), with_oracle=args.oracle)
    table = render_table(rep)
    if args.out is not None:
        print(table)
        return _emit(compare_to_json(rep), args.out)
    print(table, file=sys.stderr)
    return _emit(compare_to_json(rep), None)


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    if args.assignment:
        f, plan = assignment_from_json(Path(args.assignment).read_text(), g)
        report = verify_given(g, f, plan)
    else:
        report = verify_optimal(g)
    print(report.to_json())
    if not report.optimal:
        print(
            "OptimalityViolation: algo_syncs="
            f"{report.algo_syncs} oracle_min={report.oracle_min}",
            file=sys.stderr,
        )
        return 5
    return 0


def cmd_export_dot(args) -> int:
    g = _load_graph(args.graph)
    stream_of = sync_edges = None
    if args.assignment:
        f, plan = assignment_from_json(Path(args.assignment).read_text(), g)
        stream_of, sync_edges = f.stream_of, plan.edges
    return _emit(graph_to_dot(g, stream_of, sync_edges), args.out)


def _streams_from_schedule(ts: TaskSchedule) -> dict[int, int]:
    out: dict[int, int] = {}
    for sid, ops in enumerate(ts.streams):
        for op in ops:
            if op.kind == LAUNCH:
                out[op.arg] = sid
    return out


def cmd_export_trace(args) -> int:
    g = _load_graph(args.graph)
    cfg = _sim_config(args)
    if args.mode == "framework":
        f, plan = _load_assignment(args, g)
        result = run_framework_mode(g, f, plan, cfg)
        stream_of = dict(f.stream_of)
    elif args.schedule:
        ts = schedule_from_json(Path(args.schedule).read_text())
        result = simulate(ts, g, cfg)
        stream_of = _streams_from_schedule(ts)
    else:
        f, plan = _load_assignment(args, g)
        result = simulate(pre_run(g, f, plan), g, cfg)
        stream_of = dict(f.stream_of)
    return _emit(chrome_trace(result, g, stream_of), args.out)


def _add_sim_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="TOML or JSON config file with a [sim] table")
    p.add_argument("--capacity", type=int, help="device capacity (0 = unbounded)")
    p.add_argument("--overhead-framework", type=int, dest="overhead_framework")
    p.add_argument("--overhead-replay", type=int, dest="overhead_replay")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="streamweave",
        description="stream assignment, schedule capture, and simulation for task graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a workload graph")
    p.add_argument("--config", help="TOML or JSON config file with a [workload] table")
    p.add_argument("--kind", choices=["chain", "fork_join", "cell_stack", "layered_random"])
    p.add_argument("--n", type=int)
    p.add_argument("--width", type=int)
    p.add_argument("--cells", type=int)
    p.add_argument("--branches", type=int)
    p.add_argument("--layers", type=int)
    p.add_argument("--edge-prob", type=float, dest="edge_prob")
    p.add_argument("--seed", type=int)
    p.add_argument("--duration", type=int, help="constant task duration")
    p.add_argument(
        "--duration-uniform", type=int, nargs=3, metavar=("LO", "HI", "SEED"),
        dest="duration_uniform",
    )
    p.add_argument("--demand", type=int, help="constant task demand")
    p.add_argument("--demand-proportional", type=int, dest="demand_proportional")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("assign", help="compute streams and sync plan")
    p.add_argument("graph")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_assign)

    p = sub.add_parser("compile", help="capture a replayable schedule")
    p.add_argument("graph")
    p.add_argument("--assignment")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("simulate", help="run one simulation")
    p.add_argument("graph")
    p.add_argument("--schedule")
    p.add_argument("--assignment")
    p.add_argument("--mode", choices=["replay", "framework"], default="replay")
    _add_sim_flags(p)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="compare submission modes and layouts")
    p.add_argument("graph")
    _add_sim_flags(p)
    p.add_argument("--oracle", action="store_true", help="also check sync optimality")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="check sync minimality exhaustively")
    p.add_argument("graph")
    p.add_argument("--assignment", help="verify this assignment instead")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-dot", help="emit Graphviz DOT")
    p.add_argument("graph")
    p.add_argument("--assignment")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("export-trace", help="emit a Chrome trace timeline")
    p.add_argument("graph")
    p.add_argument("--schedule")
    p.add_argument("--assignment")
    p.add_argument("--mode", choices=["replay", "framework"], default="replay")
    _add_sim_flags(p)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_export_trace)

    return parser


def _diag(e: BaseException) -> None:
    if isinstance(e, StreamWeaveError):
        line = e.diagnostic()
    else:
        line = f"{type(e).__name__}: {e}"
    first = line.splitlines()[0] if line else type(e).__name__
    print(first, file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TooLarge as e:
        _diag(e)
        return 4
    except StreamWeaveError as e:
        _diag(e)
        return 2
    except OSError as e:
        _diag(e)
        return 3
    except (ValueError, KeyError, TypeError) as e:
        _diag(e)
        return 2


if __name__ == "__main__":
    sys.exit(main())
