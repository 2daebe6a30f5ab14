"""Pure-Python kernels for the 200 Hz inner loop.

_core.pyx mirrors these functions operation for operation; both backends
must produce bit-identical doubles (enforced by tests/test_kernel_parity.py).
Any change here must be made in lockstep there.
"""

BACKEND = "pure"


def handle_step(px, py, vx, vy, ux, uy, cx, cy, dt, inertia, damping, stiffness, torque_constant):
    """One semi-implicit Euler step of a two-axis handle.

    Net torque per axis: user torque + motor torque (current * torque
    constant) - damping * velocity - centering stiffness * position.
    Position is clamped to [-1, 1] with velocity zeroed on the clamped
    axis (hard mechanical stop). Returns (px, py, vx, vy).
    """
    ax = (ux + cx * torque_constant - damping * vx - stiffness * px) / inertia
    ay = (uy + cy * torque_constant - damping * vy - stiffness * py) / inertia
    vx = vx + ax * dt
    vy = vy + ay * dt
    px = px + vx * dt
    py = py + vy * dt
    if px > 1.0:
        px = 1.0
        vx = 0.0
    elif px < -1.0:
        px = -1.0
        vx = 0.0
    if py > 1.0:
        py = 1.0
        vy = 0.0
    elif py < -1.0:
        py = -1.0
        vy = 0.0
    return px, py, vx, vy


def coupling_forces(xs, ys, vxs, vys, k_p, k_d, f_max):
    """Spring-damper pull of each stick toward the mean of the other sticks.

    Inputs are parallel lists of per-player positions and velocities.
    Output forces are clipped per axis to [-f_max, f_max]. A single player
    feels nothing. Returns a list of (fx, fy) tuples.
    """
    n = len(xs)
    if n == 1:
        return [(0.0, 0.0)]
    inv = 1.0 / (n - 1)
    out = []
    for i in range(n):
        # Sum of differences, not difference of means: exactly zero at
        # consensus for any player count.
        sx = 0.0
        sy = 0.0
        swx = 0.0
        swy = 0.0
        for j in range(n):
            if j != i:
                sx += xs[j] - xs[i]
                sy += ys[j] - ys[i]
                swx += vxs[j] - vxs[i]
                swy += vys[j] - vys[i]
        fx = k_p * (sx * inv) + k_d * (swx * inv)
        fy = k_p * (sy * inv) + k_d * (swy * inv)
        if fx > f_max:
            fx = f_max
        elif fx < -f_max:
            fx = -f_max
        if fy > f_max:
            fy = f_max
        elif fy < -f_max:
            fy = -f_max
        out.append((fx, fy))
    return out


def world_step(px, py, vx, vy, cmdx, cmdy, accel_max, friction, dt):
    """One semi-implicit Euler step of the sliding body.

    Command is a deflection in [-1, 1] per axis scaled to acceleration;
    friction is a linear velocity decay rate. Returns (px, py, vx, vy).
    """
    vx = vx + (accel_max * cmdx - friction * vx) * dt
    vy = vy + (accel_max * cmdy - friction * vy) * dt
    px = px + vx * dt
    py = py + vy * dt
    return px, py, vx, vy
