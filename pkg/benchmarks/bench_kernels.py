#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the three hot kernels on identical inputs and prints a table with
the speedup. Example:

    python benchmarks/bench_kernels.py --rows 256 --cols 256 --repeat 3
"""

import argparse
import time

import numpy as np

from percodetect import Topology, build_lattice
from percodetect import _kernels_py

try:
    from percodetect import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=256)
    parser.add_argument("--cols", type=int, default=256)
    parser.add_argument("--topology", type=int, choices=(4, 6, 8), default=6)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--joint-rows", type=int, default=48,
        help="grid edge for the (quadratic) joint-table benchmark",
    )
    args = parser.parse_args()

    lattice = build_lattice(args.rows, args.cols, Topology(args.topology))
    rng = np.random.default_rng(args.seed)
    order = rng.permutation(lattice.site_count).astype(np.int64)
    active = (rng.random(lattice.site_count) < 0.5).astype(np.uint8)

    small = build_lattice(args.joint_rows, args.joint_rows, Topology(args.topology))
    n_inner = max(small.site_count // 16, 1)
    inner = np.sort(
        rng.choice(small.site_count, size=n_inner, replace=False)
    ).astype(np.int64)
    outer = np.setdiff1d(np.arange(small.site_count, dtype=np.int64), inner)
    inner_order = rng.permutation(len(inner)).astype(np.int64)
    outer_order = rng.permutation(len(outer)).astype(np.int64)

    cases = [
        (
            f"max_cluster_curve {args.rows}x{args.cols}",
            lambda k: k.max_cluster_curve(lattice.nbr_indices, lattice.nbr_starts, order),
        ),
        (
            f"label_components  {args.rows}x{args.cols}",
            lambda k: k.label_components(lattice.nbr_indices, lattice.nbr_starts, active),
        ),
        (
            f"joint_table       {args.joint_rows}x{args.joint_rows} ({n_inner} inner)",
            lambda k: k.joint_max_cluster_table(
                small.nbr_indices, small.nbr_starts, inner, inner_order, outer, outer_order
            ),
        ),
    ]

    print(f"{'kernel':<40} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, call in cases:
        t_py = best_of(lambda: call(_kernels_py), args.repeat)
        if _kernels is None:
            print(f"{name:<40} {t_py * 1e3:>8.1f}ms {'n/a':>10} {'n/a':>8}")
            continue
        out_py = call(_kernels_py)
        out_c = call(_kernels)
        ref_py = out_py[0] if isinstance(out_py, tuple) else out_py
        ref_c = out_c[0] if isinstance(out_c, tuple) else out_c
        assert np.array_equal(ref_py, ref_c), f"{name}: backend mismatch"
        t_c = best_of(lambda: call(_kernels), args.repeat)
        print(f"{name:<40} {t_py * 1e3:>8.1f}ms {t_c * 1e3:>8.1f}ms {t_py / t_c:>7.1f}x")
    if _kernels is None:
        print("compiled extension not available; showed fallback only")


if __name__ == "__main__":
    main()
