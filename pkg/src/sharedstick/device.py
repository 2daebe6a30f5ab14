"""Virtual force-feedback controller: handle dynamics and the actuator path.

One controller is a two-axis handle with inertia, viscous damping and a
self-centering spring, driven by the user's torque plus the torque of a
current-commanded motor. Deflection is the normalized handle tilt per axis,
clamped to [-1, 1] by a hard mechanical stop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import _kernels

MAX_DEVICE_DT = 0.01  # s; stability guard for the stiffest supported springs


class Vec2(NamedTuple):
    """Generic per-axis pair (torque, current, velocity, ...)."""

    x: float
    y: float

    def finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)


ZERO2 = Vec2(0.0, 0.0)


@dataclass(frozen=True)
class Deflection2D:
    """Normalized joystick tilt; each axis clamped to [-1, 1] on construction."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"deflection must be finite, got ({self.x}, {self.y})")
        object.__setattr__(self, "x", min(1.0, max(-1.0, float(self.x))))
        object.__setattr__(self, "y", min(1.0, max(-1.0, float(self.y))))


@dataclass(frozen=True)
class ActuatorParams:
    """Handle plant and motor constants for one controller.

    torque_constant: N*m per ampere of motor current.
    current_max: current clip per axis, amperes.
    handle_inertia: kg*m^2 referred to the normalized deflection axis.
    damping: N*m*s per unit deflection rate.
    centering_stiffness: N*m per unit deflection (self-centering spring).
    adc_bits: deflection readout quantization; 0 disables it.
    """

    torque_constant: float = 0.02
    current_max: float = 3.0
    handle_inertia: float = 0.005
    damping: float = 0.05
    centering_stiffness: float = 0.4
    adc_bits: int = 0

    def __post_init__(self):
        for name in ("torque_constant", "current_max", "handle_inertia", "damping"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value}")
        if not (math.isfinite(self.centering_stiffness) and self.centering_stiffness >= 0):
            raise ValueError(f"centering_stiffness must be >= 0, got {self.centering_stiffness}")
        if self.adc_bits and not 2 <= self.adc_bits <= 24:
            raise ValueError(f"adc_bits must be 0 (off) or in 2..24, got {self.adc_bits}")

    @property
    def torque_max(self) -> float:
        """Largest motor torque the current clip allows, per axis."""
        return self.torque_constant * self.current_max


@dataclass(frozen=True)
class JoystickState:
    """Handle position, handle velocity and the commanded motor current."""

    position: Deflection2D = Deflection2D(0.0, 0.0)
    velocity: Vec2 = ZERO2
    applied_current: Vec2 = ZERO2

    @classmethod
    def at_rest(cls) -> "JoystickState":
        return cls()


def _require_finite(v: Vec2, what: str) -> None:
    if not v.finite():
        raise ValueError(f"{what} must be finite, got {tuple(v)}")


def torque_to_current(torque: Vec2, params: ActuatorParams) -> Vec2:
    """Convert a torque command to motor current, clipped to the drive limit."""
    _require_finite(torque, "torque")
    imax = params.current_max
    cx = torque.x / params.torque_constant
    cy = torque.y / params.torque_constant
    return Vec2(min(imax, max(-imax, cx)), min(imax, max(-imax, cy)))


def current_to_torque(current: Vec2, params: ActuatorParams) -> Vec2:
    """Motor torque produced by a current command; inverse of torque_to_current
    inside the unsaturated region."""
    _require_finite(current, "current")
    imax = params.current_max
    if abs(current.x) > imax or abs(current.y) > imax:
        raise ValueError(f"current {tuple(current)} exceeds current_max {imax}")
    return Vec2(current.x * params.torque_constant, current.y * params.torque_constant)


def step_handle(
    state: JoystickState,
    user_torque: Vec2,
    coupling_current: Vec2,
    dt: float,
    params: ActuatorParams,
) -> JoystickState:
    """Advance the handle one tick under user torque plus motor torque.

    Semi-implicit Euler; the hard stop clamps position to [-1, 1] and zeroes
    velocity on the clamped axis.
    """
    if not (math.isfinite(dt) and 0.0 < dt <= MAX_DEVICE_DT):
        raise ValueError(f"dt must be in (0, {MAX_DEVICE_DT}] s, got {dt}")
    _require_finite(user_torque, "user_torque")
    _require_finite(coupling_current, "coupling_current")
    if abs(coupling_current.x) > params.current_max or abs(coupling_current.y) > params.current_max:
        raise ValueError(
            f"coupling_current {tuple(coupling_current)} exceeds current_max {params.current_max}"
        )
    px, py, vx, vy = _kernels.handle_step(
        state.position.x,
        state.position.y,
        state.velocity.x,
        state.velocity.y,
        user_torque.x,
        user_torque.y,
        coupling_current.x,
        coupling_current.y,
        dt,
        params.handle_inertia,
        params.damping,
        params.centering_stiffness,
        params.torque_constant,
    )
    return JoystickState(Deflection2D(px, py), Vec2(vx, vy), coupling_current)


def quantize_deflection(deflection: Deflection2D, bits: int) -> Deflection2D:
    """Snap a deflection to the nearest level of a 2^bits-step grid over [-1, 1]."""
    if not 2 <= bits <= 24:
        raise ValueError(f"bits must be in 2..24, got {bits}")
    half = float(1 << (bits - 1))  # grid step is 1/half
    x = round(deflection.x * half) / half
    y = round(deflection.y * half) / half
    return Deflection2D(x, y)


def read_deflection(state: JoystickState, adc_bits: int = 0) -> Deflection2D:
    """Read out the handle position, optionally quantized to adc_bits levels."""
    if adc_bits:
        return quantize_deflection(state.position, adc_bits)
    return state.position
