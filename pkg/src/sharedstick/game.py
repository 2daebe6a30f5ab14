"""Sliding-penguin world: aggregated stick input is acceleration on ice.

The penguin slides inside a rectangular rink; leaving the rink means falling
into the sea, entering the goal rectangle wins. Both terminal states are
absorbing. Courses (rink/goal/start geometry) are plain data loadable from
JSON files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from typing import Sequence

from . import _kernels
from .device import Deflection2D, Vec2, ZERO2


class Status(IntEnum):
    SLIDING = 0
    FELL = 1
    GOAL = 2


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle in meters, closed on all edges."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        values = (self.x_min, self.y_min, self.x_max, self.y_max)
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"rectangle must be finite, got {values}")
        if self.x_min >= self.x_max or self.y_min >= self.y_max:
            raise ValueError(f"rectangle must have positive extent, got {values}")

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max

    def center(self) -> Vec2:
        return Vec2((self.x_min + self.x_max) / 2.0, (self.y_min + self.y_max) / 2.0)


@dataclass(frozen=True)
class Course:
    """Rink/goal geometry plus the start point."""

    rink: Rect = Rect(-8.0, -4.5, 8.0, 4.5)
    goal: Rect = Rect(6.0, -1.0, 8.0, 1.0)
    start: Vec2 = ZERO2

    def __post_init__(self):
        if not self.rink.contains(self.start.x, self.start.y):
            raise ValueError(f"start {tuple(self.start)} lies outside the rink")
        if self.goal.contains(self.start.x, self.start.y):
            raise ValueError("start must not lie inside the goal")


@dataclass(frozen=True)
class GameParams:
    """accel_max: m/s^2 at full deflection; friction: 1/s decay; dt_game: s."""

    accel_max: float = 6.0
    friction: float = 0.3
    dt_game: float = 0.02

    def __post_init__(self):
        if not (math.isfinite(self.accel_max) and self.accel_max > 0):
            raise ValueError(f"accel_max must be > 0, got {self.accel_max}")
        if not (math.isfinite(self.friction) and self.friction >= 0):
            raise ValueError(f"friction must be >= 0, got {self.friction}")
        if not (math.isfinite(self.dt_game) and self.dt_game > 0):
            raise ValueError(f"dt_game must be > 0, got {self.dt_game}")


@dataclass(frozen=True)
class PenguinWorld:
    position: Vec2
    velocity: Vec2
    rink: Rect
    goal: Rect
    status: Status
    elapsed: float = 0.0


def new_world(course: Course) -> PenguinWorld:
    return PenguinWorld(
        position=course.start,
        velocity=ZERO2,
        rink=course.rink,
        goal=course.goal,
        status=Status.SLIDING,
    )


def classify_state(world: PenguinWorld) -> Status:
    """Goal wins over Fell when both rectangles apply; otherwise Sliding."""
    x, y = world.position
    if world.goal.contains(x, y):
        return Status.GOAL
    if not world.rink.contains(x, y):
        return Status.FELL
    return Status.SLIDING


def aggregate_inputs(deflections: Sequence[Deflection2D]) -> Deflection2D:
    """Componentwise mean of all players' deflections."""
    n = len(deflections)
    if n == 0:
        raise ValueError("aggregate_inputs needs at least one deflection")
    sx = 0.0
    sy = 0.0
    for d in deflections:
        sx += d.x
        sy += d.y
    return Deflection2D(sx / n, sy / n)


def step_world(world: PenguinWorld, command: Deflection2D, params: GameParams) -> PenguinWorld:
    """Advance one game tick; terminal worlds are returned unchanged."""
    if world.status is not Status.SLIDING:
        return world
    if not world.velocity.finite() or not math.isfinite(world.elapsed):
        raise ValueError("world state must be finite")
    px, py, vx, vy = _kernels.world_step(
        world.position.x,
        world.position.y,
        world.velocity.x,
        world.velocity.y,
        command.x,
        command.y,
        params.accel_max,
        params.friction,
        params.dt_game,
    )
    stepped = PenguinWorld(
        position=Vec2(px, py),
        velocity=Vec2(vx, vy),
        rink=world.rink,
        goal=world.goal,
        status=Status.SLIDING,
        elapsed=world.elapsed + params.dt_game,
    )
    status = classify_state(stepped)
    if status is Status.SLIDING:
        return stepped
    return PenguinWorld(
        position=stepped.position,
        velocity=stepped.velocity,
        rink=world.rink,
        goal=world.goal,
        status=status,
        elapsed=stepped.elapsed,
    )


def load_course(path: str | Path) -> Course:
    """Read a course file: {"rink": [x0,y0,x1,y1], "goal": [...], "start": [x,y]}."""
    raw = json.loads(Path(path).read_text())
    return course_from_dict(raw)


def course_from_dict(raw: dict) -> Course:
    try:
        rink = Rect(*[float(v) for v in raw["rink"]])
        goal = Rect(*[float(v) for v in raw["goal"]])
        start = Vec2(*[float(v) for v in raw.get("start", (0.0, 0.0))])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed course: {exc}") from exc
    return Course(rink=rink, goal=goal, start=start)


def course_to_dict(course: Course) -> dict:
    return {
        "rink": [course.rink.x_min, course.rink.y_min, course.rink.x_max, course.rink.y_max],
        "goal": [course.goal.x_min, course.goal.y_min, course.goal.x_max, course.goal.y_max],
        "start": [course.start.x, course.start.y],
    }
