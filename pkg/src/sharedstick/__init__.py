"""Shared-haptics multiplayer joystick emulation.

Virtual force-feedback controllers are coupled through a clipped
spring-damper law and drive a cooperative ice-sliding game over an OSC wire
protocol. Scripted agents or browser clients play; sessions are
deterministic and replayable.
"""

from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
