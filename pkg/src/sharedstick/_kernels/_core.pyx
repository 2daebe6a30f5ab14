# cython: language_level=3, boundscheck=False, cdivision=False
"""Compiled kernels for the 200 Hz inner loop.

Operation-for-operation twin of _pure.py; compiled with -ffp-contract=off
so both backends produce bit-identical doubles. Keep changes in lockstep.
"""

BACKEND = "compiled"


def handle_step(double px, double py, double vx, double vy,
                double ux, double uy, double cx, double cy,
                double dt, double inertia, double damping,
                double stiffness, double torque_constant):
    """One semi-implicit Euler step of a two-axis handle."""
    cdef double ax = (ux + cx * torque_constant - damping * vx - stiffness * px) / inertia
    cdef double ay = (uy + cy * torque_constant - damping * vy - stiffness * py) / inertia
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


def coupling_forces(list xs, list ys, list vxs, list vys,
                    double k_p, double k_d, double f_max):
    """Spring-damper pull of each stick toward the mean of the other sticks."""
    cdef Py_ssize_t n = len(xs)
    if n == 1:
        return [(0.0, 0.0)]
    cdef double inv = 1.0 / (n - 1)
    cdef Py_ssize_t i, j
    cdef double xi, yi, vxi, vyi, sx, sy, swx, swy, fx, fy
    out = []
    for i in range(n):
        # Sum of differences, not difference of means: exactly zero at
        # consensus for any player count.
        xi = <double> xs[i]
        yi = <double> ys[i]
        vxi = <double> vxs[i]
        vyi = <double> vys[i]
        sx = 0.0
        sy = 0.0
        swx = 0.0
        swy = 0.0
        for j in range(n):
            if j != i:
                sx += <double> xs[j] - xi
                sy += <double> ys[j] - yi
                swx += <double> vxs[j] - vxi
                swy += <double> vys[j] - vyi
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


def world_step(double px, double py, double vx, double vy,
               double cmdx, double cmdy,
               double accel_max, double friction, double dt):
    """One semi-implicit Euler step of the sliding body."""
    vx = vx + (accel_max * cmdx - friction * vx) * dt
    vy = vy + (accel_max * cmdy - friction * vy) * dt
    px = px + vx * dt
    py = py + vy * dt
    return px, py, vx, vy
