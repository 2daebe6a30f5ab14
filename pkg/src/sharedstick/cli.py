"""Operator entry points.

Subcommands:
    serve         run a live session (UDP/OSC + browser bridge)
    experiment    run scripted conditions headlessly and write reports
    replay        re-simulate a logged run and verify bit-identity
    encode-check  print the golden OSC byte vectors for the protocol doc

Exit codes: 0 success, 1 runtime/verification failure, 2 bad config or usage.
"""

from __future__ import annotations

import argparse
import logging
import signal
import sys
from pathlib import Path

from . import _kernels, __version__
from .config import (
    load_json,
    policy_from_dict,
    scripted_spec_from_dict,
    session_config_from_dict,
)
from .device import Deflection2D, Vec2
from .experiments import Condition, coupling_comparison_conditions, run_experiment
from .game import Course, course_from_dict, new_world
from .osc import OscMessage, encode_osc, make_force_msg, make_game_state_msg, make_stick_msg
from .runlog import replay_run
from .scripted import ScriptedSpec
from .session import SessionConfig

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    pass


def _session_config(args) -> tuple[SessionConfig, Course, list]:
    doc = {}
    if args.config:
        doc = load_json(args.config)
    session_doc = doc.get("session", doc if "player_count" in doc else {})
    config = session_config_from_dict(session_doc)
    overrides = {}
    if args.players is not None:
        overrides["player_count"] = args.players
    if args.haptics is not None:
        overrides["haptic_enabled"] = args.haptics == "on"
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        from dataclasses import replace

        config = replace(config, **overrides)
    course = course_from_dict(doc["course"]) if "course" in doc else Course()
    agents = [policy_from_dict(p) for p in doc.get("agents", [])]
    return config, course, agents


def cmd_serve(args) -> int:
    from .serve import ServeRunner

    try:
        config, course, agent_policies = _session_config(args)
        if args.agents is not None:
            from .agents import PolicyConfig

            agent_policies = [PolicyConfig(kind="goal_seeker") for _ in range(args.agents)]
        if len(agent_policies) > config.player_count:
            raise ConfigError(
                f"{len(agent_policies)} agents exceed {config.player_count} slots"
            )
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        runner = ServeRunner(
            config,
            course,
            out_dir=args.out,
            host=args.host,
            port_osc=args.port_osc,
            port_bridge=args.port_bridge,
            agent_policies=tuple(agent_policies),
            max_seconds=args.max_seconds,
        )
    except OSError as exc:
        print(f"cannot bind endpoints: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    signal.signal(signal.SIGINT, lambda *_: runner.stop())
    signal.signal(signal.SIGTERM, lambda *_: runner.stop())
    print(
        f"serving {config.player_count} slots "
        f"(osc udp://{runner.udp.address[0]}:{runner.udp.address[1]}, "
        f"bridge ws://{runner.bridge.address[0]}:{runner.bridge.address[1]}, "
        f"kernels {_kernels.BACKEND})",
        flush=True,
    )
    runner.run()
    print(f"stopped after {len(runner.session.records)} game ticks")
    return EXIT_OK


def _experiment_conditions(args) -> list[Condition]:
    if args.canned:
        seeds = tuple(range(args.repetitions))
        if args.canned == "coupling":
            return coupling_comparison_conditions(seeds)
        raise ConfigError(f"unknown canned experiment {args.canned!r}")
    if not args.config:
        raise ConfigError("experiment needs --config FILE or --canned NAME")
    doc = load_json(args.config)
    default_seeds = doc.get("seeds", [])
    conditions = []
    for entry in doc.get("conditions", []):
        try:
            spec = scripted_spec_from_dict(entry)
            seeds = tuple(entry.get("seeds", default_seeds))
            conditions.append(Condition(entry["name"], spec, seeds))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad condition entry: {exc}") from exc
    if not conditions:
        raise ConfigError("experiment config has no conditions")
    return conditions


def cmd_experiment(args) -> int:
    try:
        if args.repetitions is not None and args.repetitions <= 0:
            raise ConfigError(f"repetitions must be positive, got {args.repetitions}")
        conditions = _experiment_conditions(args)
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    report = run_experiment(conditions, out_dir=args.out)
    from .experiments import summary_table

    sys.stdout.write(summary_table(report))
    if args.out:
        print(f"report written to {args.out}")
    return EXIT_OK


def cmd_replay(args) -> int:
    run_dir = Path(args.run_dir)
    try:
        result = replay_run(run_dir)
    except (OSError, ValueError) as exc:
        print(f"cannot replay {run_dir}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if result.ok:
        print(f"replay ok: {result.ticks} ticks, {result.detail}")
        return EXIT_OK
    print(f"replay mismatch: {result.detail}", file=sys.stderr)
    return EXIT_RUNTIME


def cmd_encode_check(args) -> int:
    """Print the protocol golden vectors (one per line: label, hex)."""
    samples: list[tuple[str, OscMessage]] = [
        ("float_arg", OscMessage("/a", (1.0,))),
        ("no_args", OscMessage("/ping")),
        ("stick_1", make_stick_msg(1, Deflection2D(0.5, -0.25))),
        ("force_2", make_force_msg(2, Vec2(0.1, 0.0))),
        ("game_state_start", make_game_state_msg(new_world(Course()))),
    ]
    for label, msg in samples:
        data = encode_osc(msg)
        print(f"{label:18s} {msg.address:15s} {data.hex()}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sharedstick",
        description="Coupled force-feedback joystick sessions over OSC.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run a live session")
    serve.add_argument("--config", type=Path, help="session config JSON")
    serve.add_argument("--out", type=Path, help="directory for tick logs")
    serve.add_argument("--players", type=int, help="override player count (2..4)")
    serve.add_argument("--haptics", choices=("on", "off"), help="override haptics flag")
    serve.add_argument("--seed", type=int, help="override session seed")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port-osc", type=int, default=9000, help="UDP/OSC port")
    serve.add_argument("--port-bridge", type=int, default=8765, help="websocket bridge port")
    serve.add_argument("--agents", type=int, help="fill the top N slots with goal seekers")
    serve.add_argument("--max-seconds", type=float, help="stop after this much played time")
    serve.set_defaults(fn=cmd_serve)

    experiment = sub.add_parser("experiment", help="run scripted conditions")
    experiment.add_argument("--config", type=Path, help="experiment definition JSON")
    experiment.add_argument("--canned", choices=("coupling",), help="built-in experiment")
    experiment.add_argument(
        "--repetitions", type=int, default=30, help="seeds per condition for --canned"
    )
    experiment.add_argument("--out", type=Path, help="directory for reports and run logs")
    experiment.set_defaults(fn=cmd_experiment)

    replay = sub.add_parser("replay", help="verify a logged run reproduces bit-identically")
    replay.add_argument("run_dir", type=Path, help="directory with run.json and ticks.csv")
    replay.set_defaults(fn=cmd_replay)

    encode_check = sub.add_parser("encode-check", help="print golden OSC byte vectors")
    encode_check.set_defaults(fn=cmd_encode_check)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
