"""End-to-end OSC over real UDP sockets against a live server."""

import socket
import threading
import time

import pytest

from sharedstick.device import Deflection2D
from sharedstick.osc import (
    OscError,
    decode_osc,
    encode_osc,
    make_stick_msg,
    parse_force_msg,
    parse_game_state_msg,
)
from sharedstick.serve import ServeRunner
from sharedstick.session import SessionConfig


@pytest.fixture
def live_server():
    runner = ServeRunner(
        SessionConfig(player_count=2),
        port_osc=0,
        port_bridge=0,
        max_seconds=30.0,
    )
    thread = threading.Thread(target=runner.run, daemon=True)
    thread.start()
    yield runner
    runner.stop()
    thread.join(timeout=5.0)


class UdpClient:
    def __init__(self, server_addr):
        self.sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self.sock.bind(("127.0.0.1", 0))
        self.sock.settimeout(0.05)
        self.server = server_addr

    def send_stick(self, slot, x, y):
        self.sock.sendto(encode_osc(make_stick_msg(slot, Deflection2D(x, y))), self.server)

    def drain(self):
        out = []
        while True:
            try:
                payload, _ = self.sock.recvfrom(65535)
            except (TimeoutError, socket.timeout):
                return out
            try:
                out.append(decode_osc(payload))
            except OscError:
                pass


class TestUdpSession:
    def test_two_udp_controllers_drive_the_game(self, live_server):
        c1 = UdpClient(live_server.udp.address)
        c2 = UdpClient(live_server.udp.address)
        forces1 = []
        states = []
        deadline = time.time() + 8.0
        while time.time() < deadline and not (forces1 and states):
            c1.send_stick(1, 1.0, 0.0)
            c2.send_stick(2, -1.0, 0.0)
            for msg in c1.drain():
                if msg.address == "/ctrl/1/force":
                    _, current = parse_force_msg(msg)
                    if current.x != 0.0:
                        forces1.append(current)
                elif msg.address == "/game/state":
                    states.append(parse_game_state_msg(msg))
        assert forces1, "opposed sticks should produce nonzero force over UDP"
        assert forces1[-1].x < 0
        assert states, "game state should broadcast over UDP"

    def test_slot_binding_rejects_second_source(self, live_server):
        c1 = UdpClient(live_server.udp.address)
        impostor = UdpClient(live_server.udp.address)
        for _ in range(20):
            c1.send_stick(1, 0.5, 0.0)
            impostor.send_stick(1, -0.5, 0.0)
            time.sleep(0.01)
        # The impostor's reports must not move slot 1's view negative.
        session = live_server.session
        view = session._slots[1].view if 1 in session._slots else None
        assert view is not None
        assert view.position.x > 0.0
