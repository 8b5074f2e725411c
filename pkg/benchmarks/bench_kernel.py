#!/usr/bin/env python3
"""Time the Monte Carlo calibration kernel: compiled extension vs pure Python.

Both backends draw identical tables from identical streams, so the check
column also verifies the outputs agree bit for bit while timing them.

Usage:
    python benchmarks/bench_kernel.py [--trials N] [--repeat K]
"""

import argparse
import time

import numpy as np

from chi_audit import _kernel as pure

try:
    from chi_audit import _ckernel as compiled
except ImportError:
    compiled = None

CASES = [
    ("2x2, rows 40/40", [40, 40], [0.5, 0.5]),
    ("5x2, uneven rows", [479, 36, 148, 110, 223], [0.38, 0.62]),
    ("3x4, medium rows", [334, 299, 296], [0.27, 0.25, 0.27, 0.21]),
]


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=20000,
                        help="Monte Carlo trials per case (default 20000)")
    parser.add_argument("--repeat", type=int, default=3,
                        help="timing repetitions, best is kept (default 3)")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    if compiled is None:
        print("compiled backend not available; timing pure Python only\n")

    header = f"{'case':<20} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>9}  match"
    print(header)
    print("-" * len(header))
    for name, rows, probs in CASES:
        t_pure, out_pure = best_time(
            lambda: pure.null_statistics(
                pure.KIND_SUM_NORMALIZED, rows, probs, args.trials, args.seed
            ),
            args.repeat,
        )
        if compiled is None:
            print(f"{name:<20} {t_pure:>10.3f} {'-':>13} {'-':>9}  -")
            continue
        t_comp, out_comp = best_time(
            lambda: compiled.null_statistics(
                compiled.KIND_SUM_NORMALIZED, rows, probs, args.trials,
                args.seed,
            ),
            args.repeat,
        )
        match = "yes" if np.array_equal(out_pure, out_comp) else "NO"
        print(
            f"{name:<20} {t_pure:>10.3f} {t_comp:>13.4f} "
            f"{t_pure / t_comp:>8.1f}x  {match}"
        )


if __name__ == "__main__":
    main()
