"""Shared-haptics force law.

Every player's stick is pulled toward the mean of the other players' sticks
by a clipped spring-damper. Aligned sticks feel nothing; opposed sticks feel
the full clip torque. Haptics-off is exactly zero gains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import _kernels
from .device import Deflection2D, Vec2

#: Gains that make the coupling a no-op (the haptics-off mode).
ZERO_GAINS: "CouplingGains"


@dataclass(frozen=True)
class CouplingGains:
    """Spring-damper coupling gains.

    k_p: torque per unit deflection difference, N*m.
    k_d: torque per unit deflection-rate difference, N*m*s.
    f_max: per-axis torque clip, N*m (math.inf disables clipping).
    """

    k_p: float = 1.5
    k_d: float = 0.05
    f_max: float = 0.06

    def __post_init__(self):
        if not (math.isfinite(self.k_p) and self.k_p >= 0):
            raise ValueError(f"k_p must be >= 0, got {self.k_p}")
        if not (math.isfinite(self.k_d) and self.k_d >= 0):
            raise ValueError(f"k_d must be >= 0, got {self.k_d}")
        if not self.f_max > 0:
            raise ValueError(f"f_max must be > 0, got {self.f_max}")


ZERO_GAINS = CouplingGains(k_p=0.0, k_d=0.0)


def coupling_forces(
    positions: Sequence[Deflection2D],
    velocities: Sequence[Vec2],
    gains: CouplingGains,
) -> tuple[Vec2, ...]:
    """Per-player coupling torque, one entry per connected player.

    Player i is pulled toward the mean position (and mean velocity) of the
    other players; a lone player feels nothing.
    """
    n = len(positions)
    if n == 0:
        raise ValueError("coupling_forces needs at least one player")
    if len(velocities) != n:
        raise ValueError(f"positions ({n}) and velocities ({len(velocities)}) differ in length")
    for v in velocities:
        if not v.finite():
            raise ValueError(f"velocity must be finite, got {tuple(v)}")
    forces = _kernels.coupling_forces(
        [p.x for p in positions],
        [p.y for p in positions],
        [v.x for v in velocities],
        [v.y for v in velocities],
        gains.k_p,
        gains.k_d,
        gains.f_max,
    )
    return tuple(Vec2(fx, fy) for fx, fy in forces)


def disagreement_index(positions: Sequence[Deflection2D]) -> float:
    """Mean Euclidean distance over unordered player pairs.

    Zero iff all deflections coincide; at most 2*sqrt(2) for two players in
    full two-axis opposition.
    """
    n = len(positions)
    if n < 2:
        raise ValueError("disagreement_index needs at least two players")
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            dx = positions[i].x - positions[j].x
            dy = positions[i].y - positions[j].y
            total += math.sqrt(dx * dx + dy * dy)
    return total / (n * (n - 1) // 2)
