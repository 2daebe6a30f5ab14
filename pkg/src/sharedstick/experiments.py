"""Experiment runner: coordination metrics with haptics on vs off.

Each condition is a scripted session template run across a seed set; metrics
are pure post-processing of the tick records. Reports are a per-run CSV plus
a plain-text summary table, both byte-stable for identical inputs.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, replace
from pathlib import Path

from .agents import PolicyConfig
from .game import Course, Status
from .runlog import write_run
from .scripted import ScriptedSpec, run_scripted
from .session import TickRecord


@dataclass(frozen=True)
class Condition:
    """A named scripted-session template plus the seeds to run it under."""

    name: str
    spec: ScriptedSpec
    seeds: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if not self.name or any(ch in self.name for ch in ",\n"):
            raise ValueError(f"condition name must be nonempty without commas, got {self.name!r}")
        if len(self.seeds) == 0:
            raise ValueError(f"condition {self.name!r} has no seeds (zero repetitions)")


@dataclass(frozen=True)
class RunMetrics:
    condition: str
    seed: int
    ticks: int
    completed: bool
    fell: bool
    time_to_goal: float | None
    path_rms: float
    mean_disagreement: float
    mean_command_x: float
    mean_stick_x: tuple[float, ...]


@dataclass(frozen=True)
class ConditionSummary:
    condition: str
    runs: int
    completion_rate: float
    fall_rate: float
    time_to_goal_mean: float | None
    time_to_goal_sd: float | None
    path_rms_mean: float
    path_rms_sd: float
    disagreement_mean: float
    disagreement_sd: float


@dataclass(frozen=True)
class ExperimentReport:
    rows: tuple[RunMetrics, ...]
    summaries: tuple[ConditionSummary, ...]


def _line_deviation(px: float, py: float, ax: float, ay: float, bx: float, by: float) -> float:
    """Perpendicular distance of point p from the line through a and b."""
    dx, dy = bx - ax, by - ay
    norm = math.hypot(dx, dy)
    if norm == 0.0:
        return math.hypot(px - ax, py - ay)
    return abs(dx * (py - ay) - dy * (px - ax)) / norm


def compute_metrics(
    name: str, seed: int, records: list[TickRecord], course: Course
) -> RunMetrics:
    if not records:
        raise ValueError(f"run {name!r}/{seed} produced no tick records")
    last = records[-1]
    goal = course.goal.center()
    start = course.start
    dev_sq = 0.0
    disagreement = 0.0
    cmd_x = 0.0
    n_players = len(records[0].players)
    stick_x = [0.0] * n_players
    for r in records:
        d = _line_deviation(r.world_pos.x, r.world_pos.y, start.x, start.y, goal.x, goal.y)
        dev_sq += d * d
        disagreement += r.disagreement
        cmd_x += r.command.x
        for i, p in enumerate(r.players):
            stick_x[i] += p.deflection.x
    n = len(records)
    return RunMetrics(
        condition=name,
        seed=seed,
        ticks=n,
        completed=last.status is Status.GOAL,
        fell=last.status is Status.FELL,
        time_to_goal=last.elapsed if last.status is Status.GOAL else None,
        path_rms=math.sqrt(dev_sq / n),
        mean_disagreement=disagreement / n,
        mean_command_x=cmd_x / n,
        mean_stick_x=tuple(v / n for v in stick_x),
    )


def _mean_sd(values: list[float]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)


def summarize(name: str, rows: list[RunMetrics]) -> ConditionSummary:
    goal_times = [r.time_to_goal for r in rows if r.time_to_goal is not None]
    ttg_mean, ttg_sd = _mean_sd(goal_times) if goal_times else (None, None)
    rms_mean, rms_sd = _mean_sd([r.path_rms for r in rows])
    dis_mean, dis_sd = _mean_sd([r.mean_disagreement for r in rows])
    return ConditionSummary(
        condition=name,
        runs=len(rows),
        completion_rate=sum(r.completed for r in rows) / len(rows),
        fall_rate=sum(r.fell for r in rows) / len(rows),
        time_to_goal_mean=ttg_mean,
        time_to_goal_sd=ttg_sd,
        path_rms_mean=rms_mean,
        path_rms_sd=rms_sd,
        disagreement_mean=dis_mean,
        disagreement_sd=dis_sd,
    )


def run_condition(condition: Condition, out_dir: Path | None = None) -> list[RunMetrics]:
    rows = []
    for seed in condition.seeds:
        spec = replace(condition.spec, config=replace(condition.spec.config, seed=seed))
        records = run_scripted(spec)
        if out_dir is not None:
            write_run(out_dir / f"{condition.name}_seed{seed}", spec, records)
        rows.append(compute_metrics(condition.name, seed, records, spec.course))
    return rows


def run_experiment(
    conditions: list[Condition], out_dir: str | Path | None = None
) -> ExperimentReport:
    """Run every condition x seed and aggregate; optionally log run dirs."""
    names = [c.name for c in conditions]
    if len(set(names)) != len(names):
        raise ValueError(f"condition names must be unique, got {names}")
    out = Path(out_dir) if out_dir is not None else None
    rows: list[RunMetrics] = []
    summaries: list[ConditionSummary] = []
    for condition in conditions:
        crows = run_condition(condition, out)
        rows.extend(crows)
        summaries.append(summarize(condition.name, crows))
    report = ExperimentReport(tuple(rows), tuple(summaries))
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.csv").write_bytes(report_csv(report))
        (out / "summary.txt").write_text(summary_table(report))
    return report


def _fmt(value, places=4) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.{places}f}"
    return str(value)


def report_csv(report: ExperimentReport) -> bytes:
    buf = io.StringIO()
    buf.write(
        "condition,seed,ticks,completed,fell,time_to_goal,path_rms,"
        "mean_disagreement,mean_command_x\n"
    )
    for r in report.rows:
        ttg = repr(r.time_to_goal) if r.time_to_goal is not None else ""
        buf.write(
            f"{r.condition},{r.seed},{r.ticks},{int(r.completed)},{int(r.fell)},"
            f"{ttg},{r.path_rms!r},{r.mean_disagreement!r},{r.mean_command_x!r}\n"
        )
    return buf.getvalue().encode("ascii")


def summary_table(report: ExperimentReport) -> str:
    headers = [
        "condition",
        "runs",
        "complete",
        "fell",
        "t_goal",
        "t_goal_sd",
        "path_rms",
        "rms_sd",
        "disagree",
        "disagree_sd",
    ]
    table = [headers]
    for s in report.summaries:
        table.append(
            [
                s.condition,
                str(s.runs),
                _fmt(s.completion_rate, 2),
                _fmt(s.fall_rate, 2),
                _fmt(s.time_to_goal_mean, 2),
                _fmt(s.time_to_goal_sd, 2),
                _fmt(s.path_rms_mean),
                _fmt(s.path_rms_sd),
                _fmt(s.disagreement_mean),
                _fmt(s.disagreement_sd),
            ]
        )
    widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
    lines = []
    for row in table:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


# --- canned comparisons used by the CLI and the acceptance suite -----------


def coupling_comparison_conditions(
    seeds: tuple[int, ...],
    player_count: int = 2,
    max_seconds: float = 20.0,
) -> list[Condition]:
    """Two noisy goal seekers, identical except for coupling gains on/off."""
    from .coupling import CouplingGains
    from .session import SessionConfig

    policies = tuple(PolicyConfig(kind="noisy") for _ in range(player_count))
    base = ScriptedSpec(
        config=SessionConfig(player_count=player_count, haptic_enabled=True),
        policies=policies,
        max_seconds=max_seconds,
    )
    off = replace(
        base,
        config=replace(base.config, haptic_enabled=False),
    )
    return [
        Condition("coupled", base, seeds),
        Condition("uncoupled", off, seeds),
    ]


def override_conditions(seeds: tuple[int, ...], haptics: bool, max_seconds: float = 20.0):
    """One stubborn +x player against three goal seekers aiming -x."""
    from .device import Vec2
    from .game import Rect
    from .session import SessionConfig

    course = Course(
        rink=Rect(-8.0, -4.5, 8.0, 4.5),
        goal=Rect(-8.0, -1.0, -6.0, 1.0),
        start=Vec2(0.0, 0.0),
    )
    policies = (
        PolicyConfig(kind="stubborn", direction=Vec2(1.0, 0.0)),
        PolicyConfig(kind="goal_seeker"),
        PolicyConfig(kind="goal_seeker"),
        PolicyConfig(kind="goal_seeker"),
    )
    spec = ScriptedSpec(
        config=SessionConfig(player_count=4, haptic_enabled=haptics),
        course=course,
        policies=policies,
        max_seconds=max_seconds,
    )
    name = "override_coupled" if haptics else "override_uncoupled"
    return Condition(name, spec, seeds)
