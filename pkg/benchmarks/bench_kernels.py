"""Benchmark the numba and numpy backends on both hot kernels.

Usage:
    python benchmarks/bench_kernels.py [--shots N] [--scan-repeats N] [--best-of N]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from sglab.kernels import available_backends, sample_paths, scan_pairs
from sglab.prover import enumerate_grid_unitaries


def best_wall_time(fn, best_of: int) -> float:
    best = math.inf
    for _ in range(best_of):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_sampler(shots: int, best_of: int) -> dict[str, float]:
    # Unpolarized source through three stages with one blocking filter:
    # the same table shape the engine produces for a tandem chain.
    table = np.array([[0.5, 0.5], [0.5000000000000001, 0.4999999999999999], [0.5, 0.5]])
    selection = np.array([1, 0, 0], dtype=np.int8)
    times = {}
    for backend in available_backends():
        sample_paths(7, 1000, table, selection, True, backend)  # warm-up
        times[backend] = best_wall_time(
            lambda b=backend: sample_paths(7, shots, table, selection, True, b),
            best_of,
        )
    return times


def bench_scanner(repeats: int, best_of: int) -> dict[str, float]:
    mats = enumerate_grid_unitaries(8, "complex")
    stack = np.array([m.entries for m in mats], dtype=np.complex128)
    target = math.sqrt(0.5)

    def scan_many(backend: str) -> None:
        for _ in range(repeats):
            scan_pairs(stack, target, 1e-9, backend)

    times = {}
    for backend in available_backends():
        scan_pairs(stack, target, 1e-9, backend)  # warm-up
        times[backend] = best_wall_time(lambda b=backend: scan_many(b), best_of)
    return times


def report(name: str, times: dict[str, float], unit_note: str) -> None:
    print(f"\n{name} ({unit_note})")
    for backend, seconds in times.items():
        print(f"  {backend:<6}  {seconds * 1e3:10.2f} ms")
    if len(times) == 2:
        ratio = times["numpy"] / times["numba"]
        print(f"  numpy/numba ratio: {ratio:.2f}x")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--shots", type=int, default=2_000_000,
                        help="particles per sampler run (default 2e6)")
    parser.add_argument("--scan-repeats", type=int, default=20,
                        help="pair scans of the 512-matrix stack per run (default 20)")
    parser.add_argument("--best-of", type=int, default=5,
                        help="take the fastest of this many runs (default 5)")
    args = parser.parse_args()

    print(f"backends: {', '.join(available_backends())}")
    report(
        "sample_paths",
        bench_sampler(args.shots, args.best_of),
        f"{args.shots} shots, 3 stages, best of {args.best_of}",
    )
    report(
        "scan_pairs",
        bench_scanner(args.scan_repeats, args.best_of),
        f"{args.scan_repeats} scans of 512x512 pairs, best of {args.best_of}",
    )


if __name__ == "__main__":
    main()
