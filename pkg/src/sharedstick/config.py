"""JSON (de)serialization for configs, specs and run documents.

One schema is shared by the CLI config files, the run.json sidecar written
next to every tick log, and the experiment definitions. All loaders validate
through the dataclass constructors, so a malformed file fails with the same
diagnostics as a malformed programmatic config.
"""

from __future__ import annotations

import json
from pathlib import Path

from .agents import PolicyConfig
from .coupling import CouplingGains
from .device import ActuatorParams, Vec2
from .game import Course, GameParams, course_from_dict, course_to_dict
from .link import LatencyModel
from .scripted import ScriptedSpec
from .session import Phase, SessionConfig

FORMAT_VERSION = 1


def gains_to_dict(g: CouplingGains) -> dict:
    return {"k_p": g.k_p, "k_d": g.k_d, "f_max": g.f_max}


def gains_from_dict(d: dict) -> CouplingGains:
    return CouplingGains(**d)


def actuator_to_dict(a: ActuatorParams) -> dict:
    return {
        "torque_constant": a.torque_constant,
        "current_max": a.current_max,
        "handle_inertia": a.handle_inertia,
        "damping": a.damping,
        "centering_stiffness": a.centering_stiffness,
        "adc_bits": a.adc_bits,
    }


def actuator_from_dict(d: dict) -> ActuatorParams:
    return ActuatorParams(**d)


def game_to_dict(g: GameParams) -> dict:
    return {"accel_max": g.accel_max, "friction": g.friction, "dt_game": g.dt_game}


def game_from_dict(d: dict) -> GameParams:
    return GameParams(**d)


def latency_to_dict(latency: LatencyModel) -> dict:
    return {"delay_ms": latency.delay_ms, "jitter_ms": latency.jitter_ms}


def latency_from_dict(d: dict) -> LatencyModel:
    return LatencyModel(**d)


def phase_to_dict(p: Phase) -> dict:
    return {"haptics": p.haptics, "duration_s": p.duration_s}


def phase_from_dict(d: dict) -> Phase:
    return Phase(haptics=bool(d["haptics"]), duration_s=d.get("duration_s"))


def session_config_to_dict(c: SessionConfig) -> dict:
    return {
        "player_count": c.player_count,
        "haptic_enabled": c.haptic_enabled,
        "gains": gains_to_dict(c.gains),
        "actuator": actuator_to_dict(c.actuator),
        "game": game_to_dict(c.game),
        "device_hz": c.device_hz,
        "game_hz": c.game_hz,
        "latency": latency_to_dict(c.latency),
        "scenario": [phase_to_dict(p) for p in c.scenario],
        "seed": c.seed,
        "stale_after_s": c.stale_after_s,
    }


def session_config_from_dict(d: dict) -> SessionConfig:
    d = dict(d)
    kwargs = {}
    for key in ("player_count", "haptic_enabled", "device_hz", "game_hz", "seed", "stale_after_s"):
        if key in d:
            kwargs[key] = d[key]
    if "gains" in d:
        kwargs["gains"] = gains_from_dict(d["gains"])
    if "actuator" in d:
        kwargs["actuator"] = actuator_from_dict(d["actuator"])
    if "game" in d:
        kwargs["game"] = game_from_dict(d["game"])
    if "latency" in d:
        kwargs["latency"] = latency_from_dict(d["latency"])
    if "scenario" in d:
        kwargs["scenario"] = tuple(phase_from_dict(p) for p in d["scenario"])
    return SessionConfig(**kwargs)


def policy_to_dict(p: PolicyConfig) -> dict:
    return {
        "kind": p.kind,
        "direction": [p.direction.x, p.direction.y],
        "reaction_gain": p.reaction_gain,
        "cruise_speed": p.cruise_speed,
        "slow_radius": p.slow_radius,
        "noise_scale": p.noise_scale,
        "noise_hold_s": p.noise_hold_s,
    }


def policy_from_dict(d: dict) -> PolicyConfig:
    d = dict(d)
    if "direction" in d:
        d["direction"] = Vec2(*[float(v) for v in d["direction"]])
    return PolicyConfig(**d)


def scripted_spec_to_dict(spec: ScriptedSpec) -> dict:
    return {
        "version": FORMAT_VERSION,
        "session": session_config_to_dict(spec.config),
        "course": course_to_dict(spec.course),
        "policies": [policy_to_dict(p) for p in spec.policies],
        "max_seconds": spec.max_seconds,
    }


def scripted_spec_from_dict(d: dict) -> ScriptedSpec:
    version = d.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported run document version {version}")
    return ScriptedSpec(
        config=session_config_from_dict(d["session"]),
        course=course_from_dict(d["course"]),
        policies=tuple(policy_from_dict(p) for p in d["policies"]),
        max_seconds=float(d.get("max_seconds", 60.0)),
    )


def load_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON: {exc}") from exc


def dump_json(doc: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
