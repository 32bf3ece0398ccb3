"""Four-way mode comparison on a single graph.

Runs the cross product of submission mode (framework, replay) and stream
layout (single, multi) with one SimConfig, then reports each run's makespan
and its speedup against the framework/single baseline. Speedups are exact
rationals; JSON serializes them as [numerator, denominator] pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import json

from .assign import StreamAssignment, SyncPlan, assign_streams
from .errors import EmptyRun, TooLarge
from .graph import CompGraph
from .oracle import verify_optimal
from .schedule import pre_run
from .sim import SimConfig, SimResult, run_framework_mode, simulate

MODE_ORDER = (
    ("framework", "single"),
    ("framework", "multi"),
    ("replay", "single"),
    ("replay", "multi"),
)


@dataclass(frozen=True)
class ModeResult:
    mode: str  # "framework" | "replay"
    layout: str  # "single" | "multi"
    makespan: int
    gpu_active_time: int
    num_streams: int
    speedup_vs_baseline: Fraction


@dataclass(frozen=True)
class CompareReport:
    modes: tuple[ModeResult, ...]  # in MODE_ORDER
    stream_count: int  # streams of the multi assignment
    sync_count: int
    replay_multi_over_single: Fraction
    replay_over_framework: Fraction
    oracle_status: str | None = None


def compare_modes(
    g: CompGraph, cfg: SimConfig, with_oracle: bool = False
) -> CompareReport:
    multi_f, multi_plan = assign_streams(g)
    single_f = StreamAssignment({n.id: 0 for n in g.nodes})
    single_plan = SyncPlan(())

    runs = {
        ("framework", "single"): run_framework_mode(g, single_f, single_plan, cfg),
        ("framework", "multi"): run_framework_mode(g, multi_f, multi_plan, cfg),
        ("replay", "single"): simulate(pre_run(g, single_f, single_plan), g, cfg),
        ("replay", "multi"): simulate(pre_run(g, multi_f, multi_plan), g, cfg),
    }
    layouts = {"single": single_f, "multi": multi_f}

    baseline = runs[("framework", "single")]
    for r in runs.values():
        if r.makespan == 0:
            raise EmptyRun("cannot compare runs with zero makespan")

    rows = tuple(
        ModeResult(
            mode=mode,
            layout=layout,
            makespan=runs[(mode, layout)].makespan,
            gpu_active_time=runs[(mode, layout)].gpu_active_time,
            num_streams=layouts[layout].num_streams,
            speedup_vs_baseline=Fraction(
                baseline.makespan, runs[(mode, layout)].makespan
            ),
        )
        for mode, layout in MODE_ORDER
    )

    oracle_status: str | None = None
    if with_oracle:
        try:
            oracle_status = (
                "optimal" if verify_optimal(g).optimal else "violated"
            )
        except TooLarge:
            oracle_status = "too-large"

    return CompareReport(
        modes=rows,
        stream_count=multi_f.num_streams,
        sync_count=len(multi_plan),
        replay_multi_over_single=Fraction(
            runs[("replay", "single")].makespan, runs[("replay", "multi")].makespan
        ),
        replay_over_framework=Fraction(
            runs[("framework", "multi")].makespan, runs[("replay", "multi")].makespan
        ),
        oracle_status=oracle_status,
    )


def _frac(f: Fraction) -> list[int]:
    return [f.numerator, f.denominator]


def compare_to_json(rep: CompareReport) -> str:
    doc = {
        "stream_count": rep.stream_count,
        "sync_count": rep.sync_count,
        "modes": [
            {
                "mode": row.mode,
                "layout": row.layout,
                "makespan": row.makespan,
                "gpu_active_time": row.gpu_active_time,
                "num_streams": row.num_streams,
                "speedup_vs_baseline": _frac(row.speedup_vs_baseline),
            }
            for row in rep.modes
        ],
        "replay_multi_over_single": _frac(rep.replay_multi_over_single),
        "replay_over_framework": _frac(rep.replay_over_framework),
    }
    if rep.oracle_status is not None:
        doc["oracle_status"] = rep.oracle_status
    return json.dumps(doc, separators=(",", ":"))


def render_table(rep: CompareReport) -> str:
    headers = ("mode", "layout", "streams", "makespan", "active", "speedup")
    body = [
        (
            row.mode,
            row.layout,
            str(row.num_streams),
            str(row.makespan),
            str(row.gpu_active_time),
            f"{float(row.speedup_vs_baseline):.3f}",
        )
        for row in rep.modes
    ]
    widths = [
        max(len(headers[i]), *(len(r[i]) for r in body)) for i in range(len(headers))
    ]

    def fmt(cells) -> str:
        return "  ".join(c.ljust(widths[i]) for i, c in enumerate(cells)).rstrip()

    lines = [fmt(headers), fmt(tuple("-" * w for w in widths))]
    lines.extend(fmt(r) for r in body)
    lines.append(
        f"replay multi/single: {float(rep.replay_multi_over_single):.3f}"
        f"  replay/framework: {float(rep.replay_over_framework):.3f}"
    )
    if rep.oracle_status is not None:
        lines.append(f"oracle: {rep.oracle_status}")
    return "\n".join(lines)
