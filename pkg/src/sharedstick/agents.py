"""Scripted player policies and the client-side controller they drive.

Policies model the behaviors seen at live demos: goal seekers steering the
penguin home, stubborn players holding a fixed direction, brakers opposing
the penguin's velocity, and noisy seekers whose aim wobbles. An agent acts
like a remote controller: it owns a simulated handle, applies whatever force
current the game sends (so coupling physically perturbs its input), and
reports its deflection over the wire every device tick.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .device import (
    ActuatorParams,
    Deflection2D,
    JoystickState,
    Vec2,
    ZERO2,
    read_deflection,
    step_handle,
)
from .link import Port
from .osc import (
    GAME_STATE_ADDRESS,
    GameState,
    OscError,
    decode_osc,
    encode_osc,
    make_stick_msg,
    parse_force_msg,
    parse_game_state_msg,
)

POLICY_KINDS = ("goal_seeker", "stubborn", "braker", "noisy")

BRAKER_DEADBAND = 0.05  # m/s; below this the braker lets the stick center


@dataclass(frozen=True)
class PolicyConfig:
    """Parameters for one scripted player.

    reaction_gain is the hand stiffness, N*m of user torque per unit of
    deflection error. cruise_speed/slow_radius shape the goal seeker's
    governor; noise_scale/noise_hold_s shape the noisy seeker's aim wobble.
    """

    kind: str = "goal_seeker"
    direction: Vec2 = Vec2(1.0, 0.0)
    reaction_gain: float = 2.0
    cruise_speed: float = 3.0
    slow_radius: float = 2.0
    noise_scale: float = 0.15
    noise_hold_s: float = 0.5

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise ValueError(f"unknown policy kind {self.kind!r}, expected one of {POLICY_KINDS}")
        if not self.reaction_gain > 0:
            raise ValueError(f"reaction_gain must be > 0, got {self.reaction_gain}")
        if not self.cruise_speed > 0 or not self.slow_radius > 0:
            raise ValueError("cruise_speed and slow_radius must be > 0")
        if self.noise_scale < 0 or self.noise_hold_s <= 0:
            raise ValueError("noise_scale must be >= 0 and noise_hold_s > 0")


class Policy:
    """One player's control law plus its seeded noise state."""

    def __init__(
        self,
        config: PolicyConfig,
        goal_center: Vec2,
        device_dt: float,
        rng: random.Random | None = None,
    ):
        self.config = config
        self.goal_center = goal_center
        self._hold_ticks = max(1, round(config.noise_hold_s / device_dt))
        self._rng = rng or random.Random(0)
        self._ticks = 0
        self._noise = (0.0, 0.0)

    def desired_deflection(self, handle: JoystickState, game: GameState | None) -> tuple[float, float]:
        cfg = self.config
        if cfg.kind == "stubborn":
            return cfg.direction.x, cfg.direction.y
        if cfg.kind == "braker":
            if game is None:
                return 0.0, 0.0
            speed = math.hypot(game.vx, game.vy)
            if speed < BRAKER_DEADBAND:
                return 0.0, 0.0
            return -game.vx / speed, -game.vy / speed
        # goal_seeker and noisy
        if game is None:
            base_x, base_y = 0.0, 0.0
        else:
            dx = self.goal_center.x - game.px
            dy = self.goal_center.y - game.py
            dist = math.hypot(dx, dy)
            if dist < 1e-9:
                base_x, base_y = 0.0, 0.0
            else:
                ux, uy = dx / dist, dy / dist
                approach = game.vx * ux + game.vy * uy
                governor = min(1.0, max(0.0, 1.0 - approach / cfg.cruise_speed))
                mag = min(1.0, dist / cfg.slow_radius) * governor
                base_x, base_y = ux * mag, uy * mag
        if cfg.kind == "noisy":
            base_x += self._noise[0]
            base_y += self._noise[1]
            base_x = min(1.0, max(-1.0, base_x))
            base_y = min(1.0, max(-1.0, base_y))
        return base_x, base_y

    def step(self, handle: JoystickState, game: GameState | None) -> Vec2:
        """User torque for one device tick."""
        if self.config.kind == "noisy" and self._ticks % self._hold_ticks == 0:
            scale = self.config.noise_scale
            self._noise = (self._rng.gauss(0.0, scale), self._rng.gauss(0.0, scale))
        self._ticks += 1
        dx, dy = self.desired_deflection(handle, game)
        gain = self.config.reaction_gain
        return Vec2(gain * (dx - handle.position.x), gain * (dy - handle.position.y))


def policy_step(policy: Policy, handle: JoystickState, game: GameState | None) -> Vec2:
    return policy.step(handle, game)


class AgentClient:
    """Simulated controller + player behind a message port.

    Mirrors a physical controller's firmware loop: drain force and
    game-state messages, step the local handle under user torque plus the
    last force command, then report the deflection.
    """

    def __init__(
        self,
        slot: int,
        policy: Policy,
        actuator: ActuatorParams,
        port: Port,
        device_dt: float,
    ):
        self.slot = slot
        self.policy = policy
        self.actuator = actuator
        self.port = port
        self.device_dt = device_dt
        self.handle = JoystickState.at_rest()
        self.coupling_current = ZERO2
        self.last_game: GameState | None = None

    def tick(self, now_ns: int) -> None:
        for payload in self.port.poll(now_ns):
            try:
                msg = decode_osc(payload)
                if msg.address == GAME_STATE_ADDRESS:
                    self.last_game = parse_game_state_msg(msg)
                elif msg.address.endswith("/force"):
                    player_id, current = parse_force_msg(msg)
                    if player_id == self.slot:
                        self.coupling_current = current
                # other addresses (haptics notice) carry nothing an agent uses
            except OscError:
                continue
        torque = policy_step(self.policy, self.handle, self.last_game)
        self.handle = step_handle(
            self.handle, torque, self.coupling_current, self.device_dt, self.actuator
        )
        deflection = read_deflection(self.handle, self.actuator.adc_bits)
        self.port.send(encode_osc(make_stick_msg(self.slot, deflection)), now_ns)
