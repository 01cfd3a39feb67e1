"""Benchmark the compiled tree-walk kernel against the numpy fallback.

Usage:  python benchmarks/bench_kernels.py [--repeat 3]

Times the entropy profile (the hot path of capacity sweeps) and the full
distribution walk at growing string lengths, printing one table per model.
"""

from __future__ import annotations

import argparse
import importlib.util
import time

from mpscap import AKLT_GROUND_THETA, aklt_model, mg_model
from mpscap._kernels import _tree_py

HAVE_COMPILED = importlib.util.find_spec("mpscap._kernels._tree_cy") is not None
if HAVE_COMPILED:
    from mpscap._kernels import _tree_cy


def best_of(repeat: int, fn, *args) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_model(name: str, model, lengths: list[int], repeat: int) -> None:
    ops = model.kraus_stack()
    rho = model.invariant_state
    print(f"\n{name}: entropy profile (prune_tol 1e-14)")
    header = f"{'n':>4} {'python [ms]':>12}"
    if HAVE_COMPILED:
        header += f" {'compiled [ms]':>14} {'speedup':>8}"
    print(header)
    for n in lengths:
        t_py = best_of(repeat, _tree_py.entropy_profile, ops, rho, n, 1e-14)
        line = f"{n:>4} {t_py * 1e3:>12.2f}"
        if HAVE_COMPILED:
            t_cy = best_of(repeat, _tree_cy.entropy_profile, ops, rho, n, 1e-14)
            line += f" {t_cy * 1e3:>14.2f} {t_py / t_cy:>7.1f}x"
        print(line)
    print(f"\n{name}: full distribution at n={lengths[-1]}")
    n = lengths[-1]
    t_py = best_of(repeat, _tree_py.distribution, ops, rho, n, 1e-14)
    line = f"{n:>4} {t_py * 1e3:>12.2f}"
    if HAVE_COMPILED:
        t_cy = best_of(repeat, _tree_cy.distribution, ops, rho, n, 1e-14)
        line += f" {t_cy * 1e3:>14.2f} {t_py / t_cy:>7.1f}x"
    print(line)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if not HAVE_COMPILED:
        print("compiled kernel not built; timing the fallback only")
    bench_model(
        "aklt (theta = ground angle, ~2^(n+1) live strings)",
        aklt_model(AKLT_GROUND_THETA),
        [8, 12, 16, 18],
        args.repeat,
    )
    bench_model(
        "mg (g = 0.45, ~3 * 2^(n/2) live strings)",
        mg_model(0.45),
        [12, 20, 28, 33],
        args.repeat,
    )


if __name__ == "__main__":
    main()
