"""OSC 1.0 message codec and the controller/game address schema.

Messages only (no bundles, no pattern matching): a null-terminated address
padded to 4 bytes, a ","-prefixed type-tag string padded to 4 bytes, then
big-endian arguments. Supported argument types: int32 ("i"), float32 ("f"),
string ("s") and blob ("b"). Floats are carried at single precision, so a
decoded value is the float32 rounding of what was encoded.

Schema (one datagram per message):
    /ctrl/<id>/stick   ff   deflection x, y           controller -> game
    /ctrl/<id>/force   ff   current command, amperes  game -> controller
    /game/state        ffffi px, py, vx, vy, status   game -> all
    /session/haptics   i    1 on, 0 off               game -> all
<id> is a decimal slot number 1..4. Status: 0 sliding, 1 fell, 2 goal.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from typing import NamedTuple

from .device import Deflection2D, Vec2
from .game import PenguinWorld, Status

MIN_PLAYER_SLOT = 1
MAX_PLAYER_SLOT = 4

GAME_STATE_ADDRESS = "/game/state"
HAPTICS_ADDRESS = "/session/haptics"


class OscError(ValueError):
    """Any codec or schema failure."""


class OscEncodeError(OscError):
    pass


class OscDecodeError(OscError):
    pass


class OscSchemaError(OscError):
    """Structurally valid OSC that does not fit the controller/game schema."""


def _valid_address(address: str) -> bool:
    if not address.startswith("/"):
        return False
    return all(0x20 <= ord(ch) <= 0x7E for ch in address)


@dataclass(frozen=True)
class OscMessage:
    """Address pattern plus an ordered, typed argument list."""

    address: str
    args: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if not _valid_address(self.address):
            raise OscEncodeError(f"invalid OSC address: {self.address!r}")


def _pad_string(data: bytes) -> bytes:
    data += b"\x00"
    return data + b"\x00" * (-len(data) % 4)


def encode_osc(msg: OscMessage) -> bytes:
    """Encode one message to its 4-byte-aligned wire form."""
    out = bytearray(_pad_string(msg.address.encode("ascii")))
    tags = bytearray(b",")
    body = bytearray()
    for arg in msg.args:
        kind = type(arg)
        if kind is int:
            if not -(2**31) <= arg < 2**31:
                raise OscEncodeError(f"int32 out of range: {arg}")
            tags += b"i"
            body += struct.pack(">i", arg)
        elif kind is float:
            if not math.isfinite(arg):
                raise OscEncodeError(f"float argument must be finite, got {arg}")
            tags += b"f"
            body += struct.pack(">f", arg)
        elif kind is str:
            try:
                raw = arg.encode("ascii")
            except UnicodeEncodeError as exc:
                raise OscEncodeError(f"string argument must be ASCII: {arg!r}") from exc
            if any(b < 0x20 or b > 0x7E for b in raw):
                raise OscEncodeError(f"string argument must be printable: {arg!r}")
            tags += b"s"
            body += _pad_string(raw)
        elif kind in (bytes, bytearray):
            raw = bytes(arg)
            tags += b"b"
            body += struct.pack(">i", len(raw))
            body += raw
            body += b"\x00" * (-len(raw) % 4)
        else:
            raise OscEncodeError(f"unsupported argument type: {kind.__name__}")
    out += _pad_string(bytes(tags))
    out += body
    return bytes(out)


def _take_string(data: bytes, offset: int, what: str) -> tuple[str, int]:
    end = data.find(b"\x00", offset)
    if end < 0:
        raise OscDecodeError(f"unterminated {what}")
    raw = data[offset:end]
    next_offset = offset + ((end - offset) // 4 + 1) * 4
    if next_offset > len(data):
        raise OscDecodeError(f"truncated padding after {what}")
    if any(b != 0 for b in data[end:next_offset]):
        raise OscDecodeError(f"nonzero padding after {what}")
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError as exc:
        raise OscDecodeError(f"non-ASCII byte in {what}") from exc
    return text, next_offset


def decode_osc(data: bytes) -> OscMessage:
    """Decode one wire message; exact inverse of encode_osc on its image.

    Malformed input of any kind raises OscDecodeError; nothing is skipped
    silently.
    """
    if len(data) == 0:
        raise OscDecodeError("empty buffer")
    if len(data) % 4 != 0:
        raise OscDecodeError(f"length {len(data)} is not a multiple of 4")
    address, offset = _take_string(data, 0, "address")
    if not address.startswith("/"):
        raise OscDecodeError(f"address must start with '/': {address!r}")
    tags, offset = _take_string(data, offset, "type tags")
    if not tags.startswith(","):
        raise OscDecodeError(f"type-tag string must start with ',': {tags!r}")
    args = []
    for tag in tags[1:]:
        if tag == "i":
            if offset + 4 > len(data):
                raise OscDecodeError("truncated int32 argument")
            args.append(struct.unpack_from(">i", data, offset)[0])
            offset += 4
        elif tag == "f":
            if offset + 4 > len(data):
                raise OscDecodeError("truncated float32 argument")
            args.append(struct.unpack_from(">f", data, offset)[0])
            offset += 4
        elif tag == "s":
            text, offset = _take_string(data, offset, "string argument")
            if any(ord(ch) < 0x20 or ord(ch) > 0x7E for ch in text):
                raise OscDecodeError("unprintable string argument")
            args.append(text)
        elif tag == "b":
            if offset + 4 > len(data):
                raise OscDecodeError("truncated blob size")
            size = struct.unpack_from(">i", data, offset)[0]
            offset += 4
            if size < 0:
                raise OscDecodeError(f"negative blob size {size}")
            padded = size + (-size % 4)
            if offset + padded > len(data):
                raise OscDecodeError("truncated blob argument")
            args.append(data[offset : offset + size])
            if any(b != 0 for b in data[offset + size : offset + padded]):
                raise OscDecodeError("nonzero padding after blob")
            offset += padded
        else:
            raise OscDecodeError(f"unknown type tag {tag!r}")
    if offset != len(data):
        raise OscDecodeError(f"{len(data) - offset} trailing bytes after arguments")
    try:
        return OscMessage(address, tuple(args))
    except OscEncodeError as exc:  # unprintable address characters
        raise OscDecodeError(str(exc)) from exc


# --- address schema -------------------------------------------------------


def _check_slot(player_id: int) -> int:
    if type(player_id) is not int or not MIN_PLAYER_SLOT <= player_id <= MAX_PLAYER_SLOT:
        raise OscSchemaError(
            f"player id must be {MIN_PLAYER_SLOT}..{MAX_PLAYER_SLOT}, got {player_id!r}"
        )
    return player_id


def stick_address(player_id: int) -> str:
    return f"/ctrl/{_check_slot(player_id)}/stick"


def force_address(player_id: int) -> str:
    return f"/ctrl/{_check_slot(player_id)}/force"


def make_stick_msg(player_id: int, deflection: Deflection2D) -> OscMessage:
    return OscMessage(stick_address(player_id), (float(deflection.x), float(deflection.y)))


def make_force_msg(player_id: int, current: Vec2) -> OscMessage:
    return OscMessage(force_address(player_id), (float(current.x), float(current.y)))


def make_game_state_msg(world: PenguinWorld) -> OscMessage:
    return OscMessage(
        GAME_STATE_ADDRESS,
        (
            float(world.position.x),
            float(world.position.y),
            float(world.velocity.x),
            float(world.velocity.y),
            int(world.status),
        ),
    )


def make_haptics_msg(on: bool) -> OscMessage:
    return OscMessage(HAPTICS_ADDRESS, (1 if on else 0,))


def _parse_ctrl_address(msg: OscMessage, kind: str) -> int:
    parts = msg.address.split("/")
    if len(parts) != 4 or parts[0] != "" or parts[1] != "ctrl" or parts[3] != kind:
        raise OscSchemaError(f"not a {kind} message: {msg.address!r}")
    try:
        player_id = int(parts[2])
    except ValueError:
        raise OscSchemaError(f"non-numeric player id in {msg.address!r}") from None
    return _check_slot(player_id)


def _two_floats(msg: OscMessage, what: str) -> tuple[float, float]:
    if len(msg.args) != 2 or any(type(a) is not float for a in msg.args):
        raise OscSchemaError(f"{what} expects two float args, got {msg.args!r}")
    x, y = msg.args
    if not (math.isfinite(x) and math.isfinite(y)):
        raise OscSchemaError(f"{what} args must be finite, got {msg.args!r}")
    return x, y


def parse_stick_msg(msg: OscMessage) -> tuple[int, Deflection2D]:
    player_id = _parse_ctrl_address(msg, "stick")
    x, y = _two_floats(msg, "stick")
    return player_id, Deflection2D(x, y)


def parse_force_msg(msg: OscMessage) -> tuple[int, Vec2]:
    player_id = _parse_ctrl_address(msg, "force")
    x, y = _two_floats(msg, "force")
    return player_id, Vec2(x, y)


class GameState(NamedTuple):
    """Decoded /game/state broadcast."""

    px: float
    py: float
    vx: float
    vy: float
    status: Status


def parse_game_state_msg(msg: OscMessage) -> GameState:
    if msg.address != GAME_STATE_ADDRESS:
        raise OscSchemaError(f"not a game-state message: {msg.address!r}")
    if len(msg.args) != 5:
        raise OscSchemaError(f"game state expects 5 args, got {len(msg.args)}")
    px, py, vx, vy, status = msg.args
    if any(type(a) is not float for a in (px, py, vx, vy)) or type(status) is not int:
        raise OscSchemaError(f"game state arg types wrong: {msg.args!r}")
    if not all(math.isfinite(a) for a in (px, py, vx, vy)):
        raise OscSchemaError("game state args must be finite")
    try:
        return GameState(px, py, vx, vy, Status(status))
    except ValueError:
        raise OscSchemaError(f"unknown status code {status}") from None


def parse_haptics_msg(msg: OscMessage) -> bool:
    if msg.address != HAPTICS_ADDRESS:
        raise OscSchemaError(f"not a haptics message: {msg.address!r}")
    if len(msg.args) != 1 or type(msg.args[0]) is not int or msg.args[0] not in (0, 1):
        raise OscSchemaError(f"haptics expects one 0/1 int arg, got {msg.args!r}")
    return bool(msg.args[0])
