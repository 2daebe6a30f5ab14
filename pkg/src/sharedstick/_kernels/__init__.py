"""Backend selection for the hot-loop kernels.

Prefers the compiled extension, falling back to the pure-Python twin when
the extension was not built. Set SHAREDSTICK_PURE=1 to force the fallback
(used by the parity tests and the backend benchmark).
"""

import os

if os.environ.get("SHAREDSTICK_PURE"):
    from . import _pure as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _pure as _impl  # type: ignore[no-redef]

BACKEND = _impl.BACKEND
handle_step = _impl.handle_step
coupling_forces = _impl.coupling_forces
world_step = _impl.world_step

__all__ = ["BACKEND", "handle_step", "coupling_forces", "world_step"]
