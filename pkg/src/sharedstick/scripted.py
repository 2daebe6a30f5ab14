"""Scripted sessions: agents behind seeded latency links, fully reproducible.

A ScriptedSpec captures everything that determines a run (session config,
course, one policy per slot, duration). Identical specs produce bit-identical
tick records, which is what the replay check verifies.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .agents import AgentClient, Policy, PolicyConfig
from .game import Course
from .link import loopback_pair
from .session import Session, SessionConfig, TickRecord, run_ticks


@dataclass(frozen=True)
class ScriptedSpec:
    config: SessionConfig
    course: Course = Course()
    policies: tuple[PolicyConfig, ...] = ()
    max_seconds: float = 60.0

    def __post_init__(self):
        object.__setattr__(self, "policies", tuple(self.policies))
        if len(self.policies) != self.config.player_count:
            raise ValueError(
                f"need one policy per slot: {len(self.policies)} policies for "
                f"{self.config.player_count} players"
            )
        if not self.max_seconds > 0:
            raise ValueError(f"max_seconds must be > 0, got {self.max_seconds}")


def build_scripted(spec: ScriptedSpec) -> tuple[Session, list[AgentClient]]:
    """Wire a session to one in-process agent per slot over latency links."""
    session = Session(spec.config, spec.course)
    cfg = spec.config
    agents = []
    goal_center = spec.course.goal.center()
    for slot, policy_cfg in enumerate(spec.policies, start=1):
        server_port, client_port = loopback_pair(cfg.latency, f"{cfg.seed}/slot{slot}")
        session.handle_join(slot, server_port)
        policy = Policy(
            policy_cfg,
            goal_center,
            cfg.device_dt,
            rng=random.Random(f"{cfg.seed}/agent/{slot}"),
        )
        agents.append(AgentClient(slot, policy, cfg.actuator, client_port, cfg.device_dt))
    return session, agents


def run_scripted(spec: ScriptedSpec) -> list[TickRecord]:
    """Run a scripted session to scenario end or the duration cap."""
    session, agents = build_scripted(spec)
    n_ticks = round(spec.max_seconds * spec.config.device_hz)
    run_ticks(session, agents, n_ticks)
    return session.records
