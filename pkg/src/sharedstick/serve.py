"""Wall-clock session runner for live play over UDP/OSC and the browser bridge.

One tick thread owns the session and paces virtual time against the
monotonic clock. Receiver threads (UDP, websocket handlers) only enqueue;
joins and leaves are queued as control requests and applied at tick
boundaries, keeping the single-writer contract. Tick records stream to a CSV
file as they happen, so the log is complete through the last game tick even
on SIGINT.
"""

from __future__ import annotations

import logging
import queue
import threading
import time
from pathlib import Path

import random

from . import _kernels
from .agents import AgentClient, Policy, PolicyConfig
from .bridge import BridgeServer, JoinRequest
from .config import dump_json, session_config_to_dict
from .game import Course, course_to_dict
from .link import QueuePort, UdpEndpoint, loopback_pair
from .osc import OscError, decode_osc, parse_stick_msg
from .runlog import TICKS_NAME, csv_header, record_row
from .session import Session, SessionConfig, SlotError

log = logging.getLogger(__name__)


class ServeRunner:
    """Live session over real transports, with optional agent-filled slots."""

    def __init__(
        self,
        config: SessionConfig,
        course: Course | None = None,
        out_dir: str | Path | None = None,
        host: str = "127.0.0.1",
        port_osc: int = 9000,
        port_bridge: int = 8765,
        agent_policies: tuple[PolicyConfig, ...] = (),
        max_seconds: float | None = None,
        realtime: bool = True,
    ):
        self.config = config
        self.course = course if course is not None else Course()
        self.session = Session(config, self.course)
        self.out_dir = Path(out_dir) if out_dir else None
        self.max_seconds = max_seconds
        self.realtime = realtime
        self._control: queue.SimpleQueue = queue.SimpleQueue()
        self._stop = threading.Event()
        self._udp_bindings: dict[int, tuple[str, int]] = {}
        self._slot_ports: dict[int, QueuePort] = {}
        self._agents: list[AgentClient] = []
        self._log_file = None
        self._written = 0

        self.udp = UdpEndpoint(host, port_osc)
        self.bridge = BridgeServer(self, host, port_bridge)

        # Agents fill the top slots so humans can take 1..(n-k).
        first_agent_slot = config.player_count - len(agent_policies) + 1
        goal_center = self.course.goal.center()
        for offset, policy_cfg in enumerate(agent_policies):
            slot = first_agent_slot + offset
            server_port, client_port = loopback_pair()
            self.session.handle_join(slot, server_port)
            policy = Policy(
                policy_cfg,
                goal_center,
                config.device_dt,
                rng=random.Random(f"{config.seed}/agent/{slot}"),
            )
            self._agents.append(
                AgentClient(slot, policy, config.actuator, client_port, config.device_dt)
            )

    # --- control-plane entry points called from receiver threads -----------

    def request_join(self, request: JoinRequest) -> None:
        self._control.put(("join", request))

    def request_leave(self, slot: int) -> None:
        self._control.put(("leave", slot))

    def feed_slot(self, slot: int, payload: bytes) -> None:
        port = self._slot_ports.get(slot)
        if port is not None:
            port.feed(payload)

    def stop(self) -> None:
        self._stop.set()

    # --- tick loop ----------------------------------------------------------

    def _apply_control(self) -> None:
        while True:
            try:
                kind, payload = self._control.get_nowait()
            except queue.Empty:
                return
            if kind == "join":
                request: JoinRequest = payload
                try:
                    self.session.handle_join(request.slot, request.port)
                    self._slot_ports[request.slot] = request.port
                    request.ok = True
                    request.players = self.config.player_count
                    request.haptics = self.session.haptics_on
                except (SlotError, ValueError) as exc:
                    request.ok = False
                    request.error = str(exc)
                request.done.set()
            elif kind == "leave":
                try:
                    self.session.handle_leave(payload)
                except SlotError:
                    pass
                self._slot_ports.pop(payload, None)
                self._udp_bindings.pop(payload, None)

    def _route_udp(self) -> None:
        for payload, addr in self.udp.drain():
            try:
                player_id, _ = parse_stick_msg(decode_osc(payload))
            except OscError as exc:
                log.warning("udp: dropping datagram from %s: %s", addr, exc)
                continue
            bound = self._udp_bindings.get(player_id)
            if bound is None:
                port = self.udp.port_for(addr)
                try:
                    self.session.handle_join(player_id, port)
                except (SlotError, ValueError) as exc:
                    log.warning("udp: cannot bind %s to slot %d: %s", addr, player_id, exc)
                    continue
                self._udp_bindings[player_id] = addr
                self._slot_ports[player_id] = port
                bound = addr
                log.info("udp: slot %d bound to %s", player_id, addr)
            if bound != addr:
                log.warning("udp: slot %d busy, dropping datagram from %s", player_id, addr)
                continue
            self._slot_ports[player_id].feed(payload)

    def _open_log(self) -> None:
        if self.out_dir is None:
            return
        self.out_dir.mkdir(parents=True, exist_ok=True)
        doc = {
            "mode": "serve",
            "replayable": False,
            "backend": _kernels.BACKEND,
            "session": session_config_to_dict(self.config),
            "course": course_to_dict(self.course),
        }
        dump_json(doc, self.out_dir / "serve.json")
        self._log_file = open(self.out_dir / TICKS_NAME, "w", encoding="ascii")
        self._log_file.write(csv_header(self.config.player_count) + "\n")
        self._log_file.flush()

    def _flush_records(self) -> None:
        if self._log_file is None:
            return
        records = self.session.records
        while self._written < len(records):
            self._log_file.write(record_row(records[self._written]) + "\n")
            self._written += 1
        self._log_file.flush()

    def run(self) -> None:
        """Block until stopped, the scenario finishes, or max_seconds passes."""
        cfg = self.config
        tick_ns = cfg.device_tick_ns
        ratio = cfg.ticks_per_game_tick
        self._open_log()
        start = time.monotonic()
        k = 0
        try:
            while not self._stop.is_set():
                now_ns = k * tick_ns
                if self.realtime:
                    target = start + now_ns * 1e-9
                    delay = target - time.monotonic()
                    if delay > 0:
                        time.sleep(delay)
                self._apply_control()
                self._route_udp()
                self.session.device_tick(now_ns)
                for agent in self._agents:
                    agent.tick(now_ns)
                if (k + 1) % ratio == 0:
                    self.session.game_tick(now_ns)
                    self._flush_records()
                if self.session.finished:
                    log.info("scenario finished")
                    break
                if self.max_seconds is not None and now_ns * 1e-9 >= self.max_seconds:
                    break
                k += 1
        finally:
            self._flush_records()
            if self._log_file is not None:
                self._log_file.close()
            self.udp.close()
            self.bridge.close()
