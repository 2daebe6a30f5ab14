import math
import random
import string
import struct

import pytest
from hypothesis import given, settings, strategies as st

from sharedstick.device import Deflection2D, Vec2
from sharedstick.game import Course, Status, new_world
from sharedstick.osc import (
    GAME_STATE_ADDRESS,
    OscDecodeError,
    OscEncodeError,
    OscError,
    OscMessage,
    OscSchemaError,
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

# --- independent reference encoder (kept deliberately separate from the
# implementation: builds each chunk with its own padding logic) -------------


def ref_pad(b: bytes) -> bytes:
    b = b + b"\x00"
    while len(b) % 4:
        b += b"\x00"
    return b


def ref_encode(address: str, args) -> bytes:
    tags = ","
    body = b""
    for a in args:
        if type(a) is float:
            tags += "f"
            body += struct.pack(">f", a)
        elif type(a) is int:
            tags += "i"
            body += struct.pack(">i", a)
        elif type(a) is str:
            tags += "s"
            body += ref_pad(a.encode("ascii"))
        else:
            tags += "b"
            body += struct.pack(">i", len(a)) + a + b"\x00" * (-len(a) % 4)
    return ref_pad(address.encode("ascii")) + ref_pad(tags.encode("ascii")) + body


GOLDEN_FLOAT = bytes.fromhex("2f6100002c6600003f800000")  # "/a" [1.0f]
GOLDEN_PING = bytes.fromhex("2f70696e670000002c000000")  # "/ping" []


def f32(x: float) -> float:
    return struct.unpack(">f", struct.pack(">f", x))[0]


ascii_text = st.text(alphabet=string.ascii_letters + string.digits + "_.-", min_size=0, max_size=12)
arg_values = st.one_of(
    st.integers(-(2**31), 2**31 - 1),
    st.floats(-1e30, 1e30).map(f32),
    ascii_text,
    st.binary(max_size=24),
)
messages = st.builds(
    OscMessage,
    ascii_text.map(lambda s: "/" + s),
    st.lists(arg_values, max_size=6).map(tuple),
)


class TestGoldenVectors:
    def test_float_message(self):
        msg = OscMessage("/a", (1.0,))
        assert encode_osc(msg) == GOLDEN_FLOAT
        assert ref_encode("/a", [1.0]) == GOLDEN_FLOAT

    def test_no_arg_message(self):
        msg = OscMessage("/ping")
        assert encode_osc(msg) == GOLDEN_PING
        assert ref_encode("/ping", []) == GOLDEN_PING

    def test_decode_golden(self):
        msg = decode_osc(GOLDEN_FLOAT)
        assert msg == OscMessage("/a", (1.0,))


class TestEncode:
    @given(messages)
    def test_matches_reference_encoder(self, msg):
        assert encode_osc(msg) == ref_encode(msg.address, msg.args)

    @given(messages)
    def test_length_multiple_of_four(self, msg):
        assert len(encode_osc(msg)) % 4 == 0

    def test_rejects_bad_address(self):
        with pytest.raises(OscEncodeError):
            OscMessage("no-slash")
        with pytest.raises(OscEncodeError):
            OscMessage("")
        with pytest.raises(OscEncodeError):
            OscMessage("/with\x00null")

    def test_rejects_unsupported_types(self):
        for bad in (None, 1.5j, [1], True):
            with pytest.raises(OscEncodeError):
                encode_osc(OscMessage("/x", (bad,)))

    def test_rejects_out_of_range_int(self):
        with pytest.raises(OscEncodeError):
            encode_osc(OscMessage("/x", (2**31,)))

    def test_rejects_non_finite_float(self):
        with pytest.raises(OscEncodeError):
            encode_osc(OscMessage("/x", (math.nan,)))

    def test_rejects_non_ascii_string(self):
        with pytest.raises(OscEncodeError):
            encode_osc(OscMessage("/x", ("café",)))


class TestDecode:
    @given(messages)
    @settings(max_examples=500)
    def test_round_trip_identity(self, msg):
        assert decode_osc(encode_osc(msg)) == msg

    def test_truncated_buffer(self):
        with pytest.raises(OscDecodeError):
            decode_osc(b"/a\x00")

    def test_empty_buffer(self):
        with pytest.raises(OscDecodeError):
            decode_osc(b"")

    def test_missing_comma_prefix(self):
        raw = ref_pad(b"/a") + ref_pad(b"f")
        with pytest.raises(OscDecodeError, match="type-tag"):
            decode_osc(raw)

    def test_unknown_tag_rejected_not_skipped(self):
        raw = ref_pad(b"/a") + ref_pad(b",q") + b"\x00\x00\x00\x00"
        with pytest.raises(OscDecodeError, match="unknown type tag"):
            decode_osc(raw)

    def test_nonzero_padding_rejected(self):
        raw = bytearray(GOLDEN_PING)
        raw[7] = 0x41  # inside the address padding
        with pytest.raises(OscDecodeError):
            decode_osc(bytes(raw))

    def test_trailing_bytes_rejected(self):
        with pytest.raises(OscDecodeError, match="trailing"):
            decode_osc(GOLDEN_PING + b"\x00\x00\x00\x00")

    def test_negative_blob_size(self):
        raw = ref_pad(b"/a") + ref_pad(b",b") + struct.pack(">i", -4)
        with pytest.raises(OscDecodeError, match="blob"):
            decode_osc(raw)

    def test_fuzz_mutations_never_crash(self):
        rng = random.Random(99)
        seeds = [
            encode_osc(OscMessage("/ctrl/1/stick", (0.5, -0.25))),
            encode_osc(OscMessage("/game/state", (1.0, 2.0, 0.5, -0.5, 0))),
            encode_osc(OscMessage("/x", ("hello", b"\x01\x02", 7))),
        ]
        for _ in range(20000):
            base = bytearray(rng.choice(seeds))
            for _ in range(rng.randint(1, 6)):
                op = rng.random()
                if op < 0.4 and base:
                    base[rng.randrange(len(base))] = rng.randrange(256)
                elif op < 0.7:
                    base = base[: rng.randrange(len(base) + 1)]
                else:
                    base += bytes(rng.randrange(256) for _ in range(rng.randint(1, 8)))
            try:
                decode_osc(bytes(base))
            except OscError:
                pass

    def test_fuzz_random_bytes_never_crash(self):
        rng = random.Random(100)
        for _ in range(20000):
            n = rng.randrange(0, 64)
            try:
                decode_osc(bytes(rng.randrange(256) for _ in range(n)))
            except OscError:
                pass


class TestSchema:
    def test_stick_message_shape(self):
        msg = make_stick_msg(1, Deflection2D(0.5, -0.25))
        assert msg.address == "/ctrl/1/stick"
        assert msg.args == (0.5, -0.25)

    def test_force_round_trip(self):
        msg = make_force_msg(2, Vec2(0.1, 0.0))
        pid, current = parse_force_msg(decode_osc(encode_osc(msg)))
        assert pid == 2
        assert current == Vec2(f32(0.1), 0.0)

    def test_stick_round_trip_is_float32(self):
        msg = make_stick_msg(3, Deflection2D(0.123456789, -1.0))
        pid, defl = parse_stick_msg(decode_osc(encode_osc(msg)))
        assert pid == 3
        assert defl == Deflection2D(f32(0.123456789), -1.0)

    def test_out_of_range_id_rejected(self):
        with pytest.raises(OscSchemaError):
            make_stick_msg(9, Deflection2D(0, 0))
        with pytest.raises(OscSchemaError):
            parse_stick_msg(OscMessage("/ctrl/9/stick", (0.0, 0.0)))
        with pytest.raises(OscSchemaError):
            parse_stick_msg(OscMessage("/ctrl/0/stick", (0.0, 0.0)))

    def test_wrong_address_rejected(self):
        with pytest.raises(OscSchemaError):
            parse_stick_msg(OscMessage("/ctrl/1/force", (0.0, 0.0)))
        with pytest.raises(OscSchemaError):
            parse_game_state_msg(OscMessage("/ctrl/1/stick", (0.0,) * 5))

    def test_wrong_arity_rejected(self):
        with pytest.raises(OscSchemaError):
            parse_stick_msg(OscMessage("/ctrl/1/stick", (0.0,)))

    def test_wrong_types_rejected(self):
        with pytest.raises(OscSchemaError):
            parse_stick_msg(OscMessage("/ctrl/1/stick", (1, 2)))

    def test_game_state_round_trip(self):
        w = new_world(Course())
        msg = decode_osc(encode_osc(make_game_state_msg(w)))
        state = parse_game_state_msg(msg)
        assert state.status is Status.SLIDING
        assert (state.px, state.py) == (0.0, 0.0)
        assert msg.address == GAME_STATE_ADDRESS

    def test_unknown_status_rejected(self):
        with pytest.raises(OscSchemaError):
            parse_game_state_msg(OscMessage(GAME_STATE_ADDRESS, (0.0, 0.0, 0.0, 0.0, 7)))

    def test_haptics_round_trip(self):
        for on in (True, False):
            msg = decode_osc(encode_osc(make_haptics_msg(on)))
            assert parse_haptics_msg(msg) is on
