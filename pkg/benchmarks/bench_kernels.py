"""Benchmark: compiled geometry kernels vs the pure-numpy fallback.

Times the per-frame feature kernels (triangle count, radius count, nearest
distance) over a batch of random freeze frames, which is the hot loop of
batch ingest. Run directly:

    python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import random
import time

import numpy as np

from shotspeak.kernels import available_backends
from shotspeak.pitch import GOAL_HIGH_POST, GOAL_LOW_POST


def make_frames(n_frames: int, players_per_frame: int, seed: int = 1):
    rng = random.Random(seed)
    frames = []
    for _ in range(n_frames):
        shot = (rng.uniform(60, 104.5), rng.uniform(5, 63))
        xs = np.array([rng.uniform(40, 105) for _ in range(players_per_frame)])
        ys = np.array([rng.uniform(0, 68) for _ in range(players_per_frame)])
        frames.append((shot, xs, ys))
    return frames


def run_backend(backend, frames) -> float:
    start = time.perf_counter()
    sink = 0.0
    for (sx, sy), xs, ys in frames:
        sink += backend.count_in_triangle(
            sx, sy, GOAL_LOW_POST.x, GOAL_LOW_POST.y, GOAL_HIGH_POST.x, GOAL_HIGH_POST.y,
            xs, ys, 1e-9,
        )
        sink += backend.count_within(sx, sy, xs, ys, 3.0, 1e-9)
        sink += backend.min_distance(sx, sy, xs, ys)
    elapsed = time.perf_counter() - start
    assert sink != 0.0
    return elapsed


def run_benchmark(n_frames: int = 20000, players_per_frame: int = 12, repeats: int = 3) -> dict[str, float]:
    frames = make_frames(n_frames, players_per_frame)
    report: dict[str, float] = {}
    for name, backend in available_backends().items():
        run_backend(backend, frames[: min(100, n_frames)])  # warm up
        report[name] = min(run_backend(backend, frames) for _ in range(repeats))
    return report


def main() -> None:
    n_frames, players = 20000, 12
    report = run_benchmark(n_frames, players)
    print(f"geometry kernels over {n_frames} frames x {players} players (best of 3)")
    for name, elapsed in sorted(report.items()):
        print(f"  {name:<10} {elapsed * 1e3:8.1f} ms   {n_frames / elapsed:12.0f} frames/s")
    if {"compiled", "python"} <= set(report):
        print(f"  speedup    {report['python'] / report['compiled']:8.1f}x")


if __name__ == "__main__":
    main()
