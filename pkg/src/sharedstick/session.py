"""Authoritative real-time session.

The session owns the world and a server-side view of every controller,
drives the 200 Hz device tick and the 50 Hz game tick on one thread of
virtual time, computes coupling forces, and exchanges OSC datagrams with
whatever sits behind each slot's port (in-process agents over latency links,
UDP controllers, or the browser bridge).

Scenario phases reproduce the exhibition protocol: an ordered list of
(haptics flag, duration) entries, where a missing duration means the phase
runs until the penguin reaches a terminal state. Reaching a terminal state
always advances to the next phase; the world restarts at the phase start.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

from .coupling import CouplingGains, ZERO_GAINS, coupling_forces, disagreement_index
from .device import (
    ActuatorParams,
    Deflection2D,
    JoystickState,
    Vec2,
    ZERO2,
    step_handle,
    torque_to_current,
)
from .game import Course, GameParams, PenguinWorld, Status, aggregate_inputs, new_world, step_world
from .link import LatencyModel, NO_LATENCY, Port
from .osc import (
    OscError,
    OscMessage,
    decode_osc,
    encode_osc,
    make_force_msg,
    make_game_state_msg,
    make_haptics_msg,
    parse_stick_msg,
)

log = logging.getLogger(__name__)

MIN_PLAYERS = 2
MAX_PLAYERS = 4


class SessionError(ValueError):
    pass


class SlotError(SessionError):
    """Join/leave against an invalid or occupied slot."""


@dataclass(frozen=True)
class Phase:
    """One scenario entry: haptics flag plus duration (None = until terminal)."""

    haptics: bool
    duration_s: float | None = None

    def __post_init__(self):
        if self.duration_s is not None and not self.duration_s > 0:
            raise ValueError(f"phase duration must be > 0 or None, got {self.duration_s}")


@dataclass(frozen=True)
class SessionConfig:
    player_count: int = 2
    haptic_enabled: bool = True
    gains: CouplingGains = CouplingGains()
    actuator: ActuatorParams = ActuatorParams()
    game: GameParams = GameParams()
    device_hz: int = 200
    game_hz: int = 50
    latency: LatencyModel = NO_LATENCY
    scenario: tuple[Phase, ...] = ()
    seed: int = 0
    stale_after_s: float = 0.5

    def __post_init__(self):
        if not MIN_PLAYERS <= self.player_count <= MAX_PLAYERS:
            raise SessionError(
                f"player_count must be {MIN_PLAYERS}..{MAX_PLAYERS}, got {self.player_count}"
            )
        if self.device_hz <= 0 or self.game_hz <= 0 or self.device_hz % self.game_hz != 0:
            raise SessionError(
                f"device_hz must be a positive multiple of game_hz, got {self.device_hz}/{self.game_hz}"
            )
        if abs(self.game.dt_game * self.game_hz - 1.0) > 1e-9:
            raise SessionError(
                f"game.dt_game {self.game.dt_game} does not match game_hz {self.game_hz}"
            )
        if 1.0 / self.device_hz > 0.01 + 1e-12:
            raise SessionError(f"device_hz {self.device_hz} is below the 100 Hz device minimum")
        if not self.stale_after_s > 0:
            raise SessionError(f"stale_after_s must be > 0, got {self.stale_after_s}")
        object.__setattr__(self, "scenario", tuple(self.scenario))

    @property
    def device_dt(self) -> float:
        return 1.0 / self.device_hz

    @property
    def device_tick_ns(self) -> int:
        return 1_000_000_000 // self.device_hz

    @property
    def ticks_per_game_tick(self) -> int:
        return self.device_hz // self.game_hz


@dataclass(frozen=True)
class PlayerTick:
    """Per-player slice of a game-tick record."""

    deflection: Deflection2D = Deflection2D(0.0, 0.0)
    force: Vec2 = ZERO2  # coupling torque, N*m
    current: Vec2 = ZERO2  # commanded motor current, A


@dataclass(frozen=True)
class TickRecord:
    tick: int
    t_ns: int
    phase: int
    haptics: bool
    command: Deflection2D
    world_pos: Vec2
    world_vel: Vec2
    status: Status
    elapsed: float
    disagreement: float
    players: tuple[PlayerTick, ...]


@dataclass
class _Slot:
    port: Port
    joined_ns: int
    view: JoystickState = field(default_factory=JoystickState.at_rest)
    last_report_ns: int | None = None
    last_report_pos: Deflection2D | None = None
    force: Vec2 = ZERO2
    current: Vec2 = ZERO2


class Session:
    """Single-writer session state; all methods run on the tick thread."""

    def __init__(self, config: SessionConfig, course: Course | None = None):
        self.config = config
        self.course = course if course is not None else Course()
        self.world: PenguinWorld = new_world(self.course)
        self._slots: dict[int, _Slot] = {}
        self._records: list[TickRecord] = []
        self._tick_count = 0
        self._phase_idx = 0
        self._phase_ticks = 0
        self._finished = False
        self._haptics = config.scenario[0].haptics if config.scenario else config.haptic_enabled

    # --- membership -------------------------------------------------------

    def handle_join(self, slot: int, port: Port, now_ns: int = 0) -> None:
        if not 1 <= slot <= self.config.player_count:
            raise SlotError(f"slot {slot} out of range 1..{self.config.player_count}")
        if slot in self._slots:
            raise SlotError(f"slot {slot} already occupied")
        self._slots[slot] = _Slot(port=port, joined_ns=now_ns)

    def handle_leave(self, slot: int) -> None:
        if slot not in self._slots:
            raise SlotError(f"slot {slot} is not bound")
        del self._slots[slot]

    @property
    def bound_slots(self) -> list[int]:
        return sorted(self._slots)

    @property
    def runnable(self) -> bool:
        """The world advances only with at least two bound players."""
        return len(self._slots) >= MIN_PLAYERS

    @property
    def finished(self) -> bool:
        return self._finished

    @property
    def haptics_on(self) -> bool:
        return self._haptics

    @property
    def phase_index(self) -> int:
        return self._phase_idx

    @property
    def records(self) -> list[TickRecord]:
        return self._records

    def set_haptic_mode(self, on: bool) -> None:
        """Swap coupling gains at the next device tick; idempotent."""
        self._haptics = bool(on)

    # --- ticks -------------------------------------------------------------

    def device_tick(self, now_ns: int) -> list[OscMessage]:
        """Ingest stick reports, compute coupling, emit one force message per player."""
        if self._finished:
            return []
        cfg = self.config
        stale_ns = round(cfg.stale_after_s * 1e9)
        slots = self.bound_slots
        for sid in slots:
            slot = self._slots[sid]
            latest: Deflection2D | None = None
            for payload in slot.port.poll(now_ns):
                try:
                    player_id, deflection = parse_stick_msg(decode_osc(payload))
                except OscError as exc:
                    log.warning("slot %d: dropping bad message: %s", sid, exc)
                    continue
                if player_id != sid:
                    log.warning("slot %d: dropping stick report for id %d", sid, player_id)
                    continue
                latest = deflection
            if latest is not None:
                velocity = ZERO2
                if slot.last_report_ns is not None and now_ns > slot.last_report_ns:
                    dt_report = (now_ns - slot.last_report_ns) * 1e-9
                    velocity = Vec2(
                        (latest.x - slot.last_report_pos.x) / dt_report,
                        (latest.y - slot.last_report_pos.y) / dt_report,
                    )
                slot.view = JoystickState(latest, velocity, slot.view.applied_current)
                slot.last_report_ns = now_ns
                slot.last_report_pos = latest
            else:
                last_seen = slot.last_report_ns if slot.last_report_ns is not None else slot.joined_ns
                if now_ns - last_seen > stale_ns:
                    # Silent controller: let its view self-center.
                    slot.view = step_handle(slot.view, ZERO2, ZERO2, cfg.device_dt, cfg.actuator)

        gains = cfg.gains if self._haptics else ZERO_GAINS
        out: list[OscMessage] = []
        if slots:
            forces = coupling_forces(
                [self._slots[sid].view.position for sid in slots],
                [self._slots[sid].view.velocity for sid in slots],
                gains,
            )
            for sid, force in zip(slots, forces):
                slot = self._slots[sid]
                slot.force = force
                slot.current = torque_to_current(force, cfg.actuator)
                msg = make_force_msg(sid, slot.current)
                slot.port.send(encode_osc(msg), now_ns)
                out.append(msg)
        return out

    def game_tick(self, now_ns: int) -> OscMessage | None:
        """Aggregate inputs, step the world, broadcast state, append a record."""
        if self._finished or not self.runnable:
            return None
        slots = self.bound_slots
        positions = [self._slots[sid].view.position for sid in slots]
        command = aggregate_inputs(positions)
        self.world = step_world(self.world, command, self.config.game)
        broadcast = make_game_state_msg(self.world)
        payload = encode_osc(broadcast)
        for sid in slots:
            self._slots[sid].port.send(payload, now_ns)
        players = tuple(
            PlayerTick(
                deflection=self._slots[sid].view.position,
                force=self._slots[sid].force,
                current=self._slots[sid].current,
            )
            if sid in self._slots
            else PlayerTick()
            for sid in range(1, self.config.player_count + 1)
        )
        self._records.append(
            TickRecord(
                tick=self._tick_count,
                t_ns=now_ns,
                phase=self._phase_idx,
                haptics=self._haptics,
                command=command,
                world_pos=self.world.position,
                world_vel=self.world.velocity,
                status=self.world.status,
                elapsed=self.world.elapsed,
                disagreement=disagreement_index(positions) if len(positions) >= 2 else 0.0,
                players=players,
            )
        )
        self._tick_count += 1
        self._phase_ticks += 1
        phase = self.config.scenario[self._phase_idx] if self.config.scenario else None
        if self.world.status is not Status.SLIDING:
            self._advance_phase(now_ns)
        elif phase is not None and phase.duration_s is not None:
            if self._phase_ticks >= round(phase.duration_s * self.config.game_hz):
                self._advance_phase(now_ns)
        return broadcast

    def _advance_phase(self, now_ns: int) -> None:
        self._phase_idx += 1
        if not self.config.scenario or self._phase_idx >= len(self.config.scenario):
            self._finished = True
            return
        phase = self.config.scenario[self._phase_idx]
        self.set_haptic_mode(phase.haptics)
        self._phase_ticks = 0
        self.world = new_world(self.course)
        notice = encode_osc(make_haptics_msg(phase.haptics))
        for sid in self.bound_slots:
            self._slots[sid].port.send(notice, now_ns)


def run_ticks(session: Session, clients, n_device_ticks: int, start_tick: int = 0) -> int:
    """Drive device/game ticks over virtual time; returns the next tick index.

    clients is an ordered list of objects with tick(now_ns) (agents, pumps).
    Stops early when the session's scenario is exhausted.
    """
    ratio = session.config.ticks_per_game_tick
    tick_ns = session.config.device_tick_ns
    k = start_tick
    for k in range(start_tick, start_tick + n_device_ticks):
        now_ns = k * tick_ns
        session.device_tick(now_ns)
        for client in clients:
            client.tick(now_ns)
        if (k + 1) % ratio == 0:
            session.game_tick(now_ns)
        if session.finished:
            return k + 1
    return start_tick + n_device_ticks
