"""Message transports: in-memory links with simulated latency, and UDP.

All transports move whole datagrams (one encoded OSC message each) and share
one port protocol: send(payload, now_ns) / poll(now_ns) -> list of payloads.
Simulated time is integer nanoseconds; the session's tick loop owns the
clock. Wall-clock transports (UDP, bridge) ignore the virtual timestamps and
deliver as soon as polled.
"""

from __future__ import annotations

import math
import random
import socket
import threading
from collections import deque
from dataclasses import dataclass
from typing import Protocol

MS = 1_000_000  # ns per millisecond


@dataclass(frozen=True)
class LatencyModel:
    """One-way delivery delay: fixed part plus uniform jitter, per message."""

    delay_ms: float = 0.0
    jitter_ms: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.delay_ms) and self.delay_ms >= 0):
            raise ValueError(f"delay_ms must be >= 0, got {self.delay_ms}")
        if not (math.isfinite(self.jitter_ms) and 0 <= self.jitter_ms <= self.delay_ms):
            raise ValueError(
                f"jitter_ms must be in [0, delay_ms], got {self.jitter_ms} (delay {self.delay_ms})"
            )


NO_LATENCY = LatencyModel()


class Port(Protocol):
    def send(self, payload: bytes, now_ns: int) -> None: ...

    def poll(self, now_ns: int) -> list[bytes]: ...


class MessageLink:
    """One-directional in-memory pipe with optional seeded latency.

    Messages are delivered in send order: a sampled delivery time never
    undercuts the previous message's (FIFO link, no reordering). With zero
    delay and jitter this behaves exactly like a direct handoff.
    """

    def __init__(self, latency: LatencyModel = NO_LATENCY, seed_material: str = ""):
        self._queue: deque[tuple[int, bytes]] = deque()
        self._latency = latency
        self._rng = random.Random(f"link/{seed_material}") if latency.jitter_ms else None
        self._last_delivery_ns = 0

    def send(self, payload: bytes, now_ns: int) -> None:
        delay_ms = self._latency.delay_ms
        if self._rng is not None:
            delay_ms += self._rng.uniform(-self._latency.jitter_ms, self._latency.jitter_ms)
        deliver_at = now_ns + round(delay_ms * MS)
        if deliver_at < self._last_delivery_ns:
            deliver_at = self._last_delivery_ns
        self._last_delivery_ns = deliver_at
        self._queue.append((deliver_at, payload))

    def poll(self, now_ns: int) -> list[bytes]:
        out = []
        while self._queue and self._queue[0][0] <= now_ns:
            out.append(self._queue.popleft()[1])
        return out


class LinkPort:
    """One endpoint of a bidirectional in-memory connection."""

    def __init__(self, outbound: MessageLink, inbound: MessageLink):
        self._outbound = outbound
        self._inbound = inbound

    def send(self, payload: bytes, now_ns: int) -> None:
        self._outbound.send(payload, now_ns)

    def poll(self, now_ns: int) -> list[bytes]:
        return self._inbound.poll(now_ns)


def loopback_pair(
    latency: LatencyModel = NO_LATENCY, seed_material: str = ""
) -> tuple[LinkPort, LinkPort]:
    """Create a connected (server_port, client_port) pair.

    The same latency model applies independently per direction; jitter is
    seeded separately per direction so the two streams are uncorrelated.
    """
    downstream = MessageLink(latency, f"{seed_material}/down")
    upstream = MessageLink(latency, f"{seed_material}/up")
    return LinkPort(downstream, upstream), LinkPort(upstream, downstream)


class QueuePort:
    """Thread-safe port fed by an external receiver (UDP thread, websocket).

    Inbound payloads are enqueued from any thread; the tick thread drains
    them at tick boundaries. Outbound delivery is delegated to a callback.
    """

    def __init__(self, send_fn):
        self._send_fn = send_fn
        self._inbox: deque[bytes] = deque()
        self._lock = threading.Lock()

    def feed(self, payload: bytes) -> None:
        with self._lock:
            self._inbox.append(payload)

    def send(self, payload: bytes, now_ns: int) -> None:
        self._send_fn(payload)

    def poll(self, now_ns: int) -> list[bytes]:
        with self._lock:
            out = list(self._inbox)
            self._inbox.clear()
        return out


class UdpEndpoint:
    """UDP socket wrapper: one datagram per OSC message.

    A receiver thread enqueues (payload, source address) pairs; the session
    runner routes them to slots and builds QueuePorts that send back to the
    bound address.
    """

    def __init__(self, host: str = "127.0.0.1", port: int = 9000):
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._sock.bind((host, port))
        self._inbox: deque[tuple[bytes, tuple[str, int]]] = deque()
        self._lock = threading.Lock()
        self._closed = threading.Event()
        self._thread = threading.Thread(target=self._recv_loop, daemon=True)
        self._thread.start()

    @property
    def address(self) -> tuple[str, int]:
        return self._sock.getsockname()

    def _recv_loop(self) -> None:
        while not self._closed.is_set():
            try:
                payload, addr = self._sock.recvfrom(65535)
            except OSError:
                break
            with self._lock:
                self._inbox.append((payload, addr))

    def drain(self) -> list[tuple[bytes, tuple[str, int]]]:
        with self._lock:
            out = list(self._inbox)
            self._inbox.clear()
        return out

    def send_to(self, payload: bytes, addr: tuple[str, int]) -> None:
        try:
            self._sock.sendto(payload, addr)
        except OSError:
            pass  # transport failures must not stop the tick

    def port_for(self, addr: tuple[str, int]) -> QueuePort:
        return QueuePort(lambda payload: self.send_to(payload, addr))

    def close(self) -> None:
        self._closed.set()
        try:
            # Unblock the receiver with an empty datagram to ourselves.
            self._sock.sendto(b"", self._sock.getsockname())
        except OSError:
            pass
        self._sock.close()
        self._thread.join(timeout=1.0)
