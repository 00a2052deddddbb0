#!/usr/bin/env python3
"""Benchmark the compiled kernels against their pure-python fallbacks.

Usage: python3 benchmarks/bench_kernels.py [--quick]
"""

from __future__ import annotations

import argparse
import math
import random
import time

import numpy as np

from topicaudit import _kernels_py

try:
    from topicaudit import _kernels
except ImportError:
    _kernels = None


def _time(fn, repeat: int = 3) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_levenshtein(quick: bool) -> list[tuple[str, float, float | None]]:
    rng = random.Random(1)
    rows = []
    sizes = [(8, 2000), (64, 200)] if quick else [(8, 20000), (64, 2000), (256, 200)]
    for length, pairs in sizes:
        data = [
            (
                [rng.randint(0, 50) for _ in range(length)],
                [rng.randint(0, 50) for _ in range(length)],
            )
            for _ in range(pairs)
        ]
        np_data = [
            (np.asarray(a, dtype=np.intc), np.asarray(b, dtype=np.intc)) for a, b in data
        ]
        pure = _time(lambda: [_kernels_py.levenshtein(a, b) for a, b in data])
        compiled = (
            _time(lambda: [_kernels.levenshtein(a, b) for a, b in np_data])
            if _kernels
            else None
        )
        rows.append((f"levenshtein len={length} x{pairs}", pure, compiled))
    return rows


def bench_permutations(quick: bool) -> list[tuple[str, float, float | None]]:
    rows = []
    for n in (8, 9) if quick else (8, 9, 10):
        u = list(range(2, 2 * n + 2, 2))
        v = list(reversed(u))
        center = n * (n + 1) ** 2
        target = n
        pure = _time(lambda: _kernels_py.count_perm_dot_abs_ge(u, v, center, target), repeat=1)
        compiled = (
            _time(
                lambda: _kernels.count_perm_dot_abs_ge(
                    np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64),
                    center, target,
                ),
                repeat=1,
            )
            if _kernels
            else None
        )
        rows.append((f"perm enumeration n={n} ({math.factorial(n):,} perms)", pure, compiled))
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    args = parser.parse_args()

    if _kernels is None:
        print("compiled extension not available; timing pure python only\n")

    rows = bench_levenshtein(args.quick) + bench_permutations(args.quick)
    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'pure (s)':>10}  {'compiled (s)':>12}  {'speedup':>8}")
    for label, pure, compiled in rows:
        if compiled is None:
            print(f"{label:<{width}}  {pure:>10.4f}  {'-':>12}  {'-':>8}")
        else:
            print(
                f"{label:<{width}}  {pure:>10.4f}  {compiled:>12.4f}  {pure / compiled:>7.1f}x"
            )


if __name__ == "__main__":
    main()
