"""Tick-record logs on disk and the deterministic replay check.

A run directory holds run.json (the scripted spec plus the kernel backend
that produced it) and ticks.csv (one row per game tick). Floats are written
with repr, so equal trajectories give byte-identical files and replay can
compare bytes directly.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

from . import _kernels
from .config import dump_json, load_json, scripted_spec_from_dict, scripted_spec_to_dict
from .scripted import ScriptedSpec, run_scripted
from .session import TickRecord

RUN_DOC_NAME = "run.json"
TICKS_NAME = "ticks.csv"

_FIXED_COLUMNS = [
    "tick",
    "t_ns",
    "phase",
    "haptics",
    "cmd_x",
    "cmd_y",
    "px",
    "py",
    "vx",
    "vy",
    "status",
    "elapsed",
    "disagreement",
]
_PLAYER_COLUMNS = ["defl_x", "defl_y", "force_x", "force_y", "cur_x", "cur_y"]


def csv_header(player_count: int) -> str:
    cols = list(_FIXED_COLUMNS)
    for i in range(1, player_count + 1):
        cols.extend(f"p{i}_{c}" for c in _PLAYER_COLUMNS)
    return ",".join(cols)


def record_row(r: TickRecord) -> str:
    parts = [
        str(r.tick),
        str(r.t_ns),
        str(r.phase),
        "1" if r.haptics else "0",
        repr(r.command.x),
        repr(r.command.y),
        repr(r.world_pos.x),
        repr(r.world_pos.y),
        repr(r.world_vel.x),
        repr(r.world_vel.y),
        str(int(r.status)),
        repr(r.elapsed),
        repr(r.disagreement),
    ]
    for p in r.players:
        parts.extend(
            (
                repr(p.deflection.x),
                repr(p.deflection.y),
                repr(p.force.x),
                repr(p.force.y),
                repr(p.current.x),
                repr(p.current.y),
            )
        )
    return ",".join(parts)


def records_to_csv(records: list[TickRecord], player_count: int) -> bytes:
    buf = io.StringIO()
    buf.write(csv_header(player_count))
    buf.write("\n")
    for r in records:
        buf.write(record_row(r))
        buf.write("\n")
    return buf.getvalue().encode("ascii")


def write_run(out_dir: str | Path, spec: ScriptedSpec, records: list[TickRecord]) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc = scripted_spec_to_dict(spec)
    doc["backend"] = _kernels.BACKEND
    dump_json(doc, out / RUN_DOC_NAME)
    (out / TICKS_NAME).write_bytes(records_to_csv(records, spec.config.player_count))
    return out


@dataclass(frozen=True)
class ReplayResult:
    ok: bool
    ticks: int
    first_divergent_tick: int | None = None
    detail: str = ""


def replay_run(run_dir: str | Path) -> ReplayResult:
    """Re-simulate a logged run from its spec and compare tick logs bytewise."""
    run_dir = Path(run_dir)
    doc = load_json(run_dir / RUN_DOC_NAME)
    spec = scripted_spec_from_dict(doc)
    logged = (run_dir / TICKS_NAME).read_bytes()
    recorded_backend = doc.get("backend")
    if recorded_backend and recorded_backend != _kernels.BACKEND:
        detail = f"log from {recorded_backend!r} kernels, replaying with {_kernels.BACKEND!r}; "
    else:
        detail = ""
    records = run_scripted(spec)
    fresh = records_to_csv(records, spec.config.player_count)
    if fresh == logged:
        return ReplayResult(ok=True, ticks=len(records), detail=detail + "bit-identical")
    logged_rows = logged.decode("ascii", errors="replace").splitlines()
    fresh_rows = fresh.decode("ascii").splitlines()
    limit = min(len(logged_rows), len(fresh_rows))
    for i in range(limit):
        if logged_rows[i] != fresh_rows[i]:
            tick = i - 1  # header is row 0
            return ReplayResult(
                ok=False,
                ticks=len(records),
                first_divergent_tick=tick,
                detail=detail + f"first divergence at tick {tick}",
            )
    return ReplayResult(
        ok=False,
        ticks=len(records),
        first_divergent_tick=limit - 1,
        detail=detail + f"row count differs: logged {len(logged_rows) - 1}, fresh {len(fresh_rows) - 1}",
    )
