"""Browser bridge: the OSC schema as JSON over a websocket.

Each websocket connection binds one controller slot. Messages are one JSON
object each, field names mirroring the OSC schema, and the translation to
and from OSC messages is lossless for every message type that crosses the
bridge. BRIDGE_SCHEMA is the canonical schema snapshot; the browser client
pins a copy and a test compares the two.
"""

from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass

from .device import Deflection2D, Vec2
from .game import PenguinWorld, Rect, Status
from .link import QueuePort
from .osc import (
    GAME_STATE_ADDRESS,
    HAPTICS_ADDRESS,
    OscError,
    OscMessage,
    decode_osc,
    encode_osc,
    make_force_msg,
    make_game_state_msg,
    make_haptics_msg,
    make_stick_msg,
    parse_force_msg,
    parse_game_state_msg,
    parse_haptics_msg,
    parse_stick_msg,
)

log = logging.getLogger(__name__)

BRIDGE_SCHEMA = {
    "version": 1,
    "messages": {
        "join": {
            "direction": "client->server",
            "fields": {"id": "int 1..4"},
        },
        "join_ack": {
            "direction": "server->client",
            "fields": {
                "id": "int 1..4",
                "ok": "bool",
                "players": "int 2..4",
                "haptics": "bool",
                "error": "string|null",
            },
        },
        "stick": {
            "direction": "client->server",
            "fields": {"id": "int 1..4", "x": "float -1..1", "y": "float -1..1"},
        },
        "force": {
            "direction": "server->client",
            "fields": {"id": "int 1..4", "fx": "float amperes", "fy": "float amperes"},
        },
        "state": {
            "direction": "server->client",
            "fields": {
                "px": "float meters",
                "py": "float meters",
                "vx": "float m/s",
                "vy": "float m/s",
                "status": "int 0=sliding 1=fell 2=goal",
            },
        },
        "haptics": {
            "direction": "server->client",
            "fields": {"on": "bool"},
        },
        "leave": {
            "direction": "client->server",
            "fields": {"id": "int 1..4"},
        },
    },
}


def schema_json() -> str:
    return json.dumps(BRIDGE_SCHEMA, indent=2, sort_keys=True) + "\n"


class BridgeError(ValueError):
    pass


def osc_to_json(msg: OscMessage) -> dict:
    """Translate a server-to-client OSC message to its bridge JSON object."""
    if msg.address == GAME_STATE_ADDRESS:
        s = parse_game_state_msg(msg)
        return {"type": "state", "px": s.px, "py": s.py, "vx": s.vx, "vy": s.vy,
                "status": int(s.status)}
    if msg.address == HAPTICS_ADDRESS:
        return {"type": "haptics", "on": parse_haptics_msg(msg)}
    if msg.address.endswith("/force"):
        player_id, current = parse_force_msg(msg)
        return {"type": "force", "id": player_id, "fx": current.x, "fy": current.y}
    if msg.address.endswith("/stick"):
        player_id, d = parse_stick_msg(msg)
        return {"type": "stick", "id": player_id, "x": d.x, "y": d.y}
    raise BridgeError(f"no bridge mapping for address {msg.address!r}")


def json_to_osc(obj: dict) -> OscMessage:
    """Translate a bridge JSON object to its OSC message."""
    try:
        kind = obj["type"]
        if kind == "stick":
            return make_stick_msg(int(obj["id"]), Deflection2D(float(obj["x"]), float(obj["y"])))
        if kind == "force":
            return make_force_msg(int(obj["id"]), Vec2(float(obj["fx"]), float(obj["fy"])))
        if kind == "state":
            # Rebuild a minimal world carrying exactly the broadcast fields.
            world = PenguinWorld(
                position=Vec2(float(obj["px"]), float(obj["py"])),
                velocity=Vec2(float(obj["vx"]), float(obj["vy"])),
                rink=Rect(-1, -1, 1, 1),
                goal=Rect(-1, -1, 1, 1),
                status=Status(int(obj["status"])),
            )
            return make_game_state_msg(world)
        if kind == "haptics":
            return make_haptics_msg(bool(obj["on"]))
    except BridgeError:
        raise
    except (KeyError, TypeError, ValueError, OscError) as exc:
        raise BridgeError(f"malformed bridge message {obj!r}: {exc}") from exc
    raise BridgeError(f"no OSC mapping for bridge type {obj.get('type')!r}")


@dataclass
class JoinRequest:
    slot: int
    port: QueuePort
    done: threading.Event
    ok: bool = False
    error: str = ""
    players: int = 0
    haptics: bool = False


class BridgeServer:
    """Websocket endpoint run in a background thread.

    Join/leave requests are queued to the session tick thread (the single
    writer); everything else is payload translation. One connection binds at
    most one slot and is dropped when the socket closes.
    """

    def __init__(self, runner, host: str = "127.0.0.1", port: int = 0):
        from websockets.sync.server import serve

        self._runner = runner
        self._server = serve(self._handler, host, port)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        self.address = self._server.socket.getsockname()

    def _handler(self, conn) -> None:
        slot = None
        try:
            for raw in conn:
                try:
                    obj = json.loads(raw)
                except json.JSONDecodeError:
                    log.warning("bridge: dropping non-JSON frame")
                    continue
                kind = obj.get("type")
                if kind == "join" and slot is None:
                    request = JoinRequest(
                        slot=int(obj.get("id", 0)),
                        port=QueuePort(lambda payload: self._send_osc(conn, payload)),
                        done=threading.Event(),
                    )
                    self._runner.request_join(request)
                    if not request.done.wait(timeout=5.0):
                        request.error = "session did not answer"
                    if request.ok:
                        slot = request.slot
                    conn.send(
                        json.dumps(
                            {
                                "type": "join_ack",
                                "id": request.slot,
                                "ok": request.ok,
                                "players": request.players,
                                "haptics": request.haptics,
                                "error": request.error or None,
                            }
                        )
                    )
                elif kind == "stick" and slot is not None and obj.get("id") == slot:
                    try:
                        request_payload = encode_osc(json_to_osc(obj))
                    except BridgeError as exc:
                        log.warning("bridge: %s", exc)
                        continue
                    self._runner.feed_slot(slot, request_payload)
                elif kind == "leave" and slot is not None:
                    break
                else:
                    log.warning("bridge: ignoring frame %r", obj)
        finally:
            if slot is not None:
                self._runner.request_leave(slot)

    @staticmethod
    def _send_osc(conn, payload: bytes) -> None:
        try:
            obj = osc_to_json(decode_osc(payload))
            conn.send(json.dumps(obj))
        except (OscError, BridgeError) as exc:
            log.warning("bridge: cannot translate outbound message: %s", exc)
        except Exception:
            pass  # connection closing; the handler thread cleans up

    def close(self) -> None:
        self._server.shutdown()
        self._thread.join(timeout=2.0)
