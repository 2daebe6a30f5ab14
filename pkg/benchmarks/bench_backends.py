#!/usr/bin/env python3
"""Compiled vs pure kernel benchmark.

Micro-benchmarks call each kernel directly; the end-to-end benchmark runs a
scripted 4-player session against each backend by swapping the kernel
bindings (all call sites resolve them through the module attribute).

Usage: python benchmarks/bench_backends.py [--quick]
"""

import argparse
import time

from sharedstick import _kernels
from sharedstick._kernels import _pure

try:
    from sharedstick._kernels import _core
except ImportError:
    _core = None


def bench(fn, args, n):
    t0 = time.perf_counter()
    for _ in range(n):
        fn(*args)
    return (time.perf_counter() - t0) / n * 1e9  # ns/op


def micro(n_handle, n_coupling, n_world):
    rows = []
    handle_args = (0.2, -0.1, 0.4, 0.0, 0.5, -0.2, 1.5, 0.0, 0.005, 0.005, 0.05, 0.4, 0.02)
    coupling_args = (
        [0.1, -0.4, 0.8, -0.9],
        [0.0, 0.2, -0.2, 0.5],
        [1.0, -1.0, 0.0, 2.0],
        [0.0, 0.0, 1.0, -1.0],
        1.5,
        0.05,
        0.06,
    )
    world_args = (1.0, 2.0, 3.0, -1.0, 0.7, -0.3, 6.0, 0.3, 0.02)
    cases = [
        ("handle_step", "handle_step", handle_args, n_handle),
        ("coupling_forces[n=4]", "coupling_forces", coupling_args, n_coupling),
        ("world_step", "world_step", world_args, n_world),
    ]
    for label, name, args, n in cases:
        pure_ns = bench(getattr(_pure, name), args, n)
        if _core is not None:
            core_ns = bench(getattr(_core, name), args, n)
            rows.append((label, pure_ns, core_ns, pure_ns / core_ns))
        else:
            rows.append((label, pure_ns, None, None))
    return rows


def session_seconds(seconds):
    from sharedstick.agents import PolicyConfig
    from sharedstick.device import Vec2
    from sharedstick.game import Course, Rect
    from sharedstick.link import LatencyModel
    from sharedstick.scripted import ScriptedSpec, run_scripted
    from sharedstick.session import SessionConfig

    spec = ScriptedSpec(
        config=SessionConfig(
            player_count=4,
            seed=1,
            latency=LatencyModel(delay_ms=30.0, jitter_ms=10.0),
        ),
        course=Course(rink=Rect(-2000, -2000, 2000, 2000), goal=Rect(1500, -10, 1520, 10)),
        policies=(
            PolicyConfig(kind="stubborn", direction=Vec2(1.0, 0.0)),
            PolicyConfig(kind="stubborn", direction=Vec2(-1.0, 0.0)),
            PolicyConfig(kind="noisy"),
            PolicyConfig(kind="braker"),
        ),
        max_seconds=seconds,
    )
    t0 = time.perf_counter()
    records = run_scripted(spec)
    return time.perf_counter() - t0, len(records)


def use_backend(impl):
    _kernels.handle_step = impl.handle_step
    _kernels.coupling_forces = impl.coupling_forces
    _kernels.world_step = impl.world_step


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller iteration counts")
    args = parser.parse_args()
    scale = 10 if args.quick else 1

    print(f"active backend at import: {_kernels.BACKEND}")
    if _core is None:
        print("compiled kernels not built; benchmarking pure backend only\n")

    print("\nkernel micro-benchmarks (ns/op):")
    print(f"{'kernel':24s} {'pure':>10s} {'compiled':>10s} {'speedup':>8s}")
    for label, pure_ns, core_ns, speedup in micro(
        200_000 // scale, 100_000 // scale, 200_000 // scale
    ):
        core_s = f"{core_ns:10.0f}" if core_ns is not None else f"{'-':>10s}"
        ratio = f"{speedup:7.1f}x" if speedup is not None else f"{'-':>8s}"
        print(f"{label:24s} {pure_ns:10.0f} {core_s} {ratio}")

    sim_seconds = 6.0 if args.quick else 30.0
    print(f"\nend-to-end scripted session (4 players, {sim_seconds:.0f} s simulated):")
    backends = [("pure", _pure)] + ([("compiled", _core)] if _core is not None else [])
    for name, impl in backends:
        use_backend(impl)
        wall, ticks = session_seconds(sim_seconds)
        print(
            f"  {name:9s} {wall:6.2f} s wall for {ticks} game ticks "
            f"({sim_seconds / wall:5.1f}x realtime)"
        )


if __name__ == "__main__":
    main()
