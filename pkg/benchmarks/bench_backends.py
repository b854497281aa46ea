"""Compare the compiled and pure-Python kernels on the hot paths.

    python3 benchmarks/bench_backends.py [--k 5] [--samples 1000000] [--repeat 3]

Prints CSV: task, backend, best_seconds, speedup_vs_python.
"""

import argparse
import csv
import sys
import time

from antisymid import backend
from antisymid.identity import build_rhs, verify_symbolic
from antisymid.integral import mc_estimate


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def tasks(args):
    def symbolic():
        build_rhs.cache_clear()
        assert verify_symbolic(args.k, max_k=args.k).equal

    def rhs_expand():
        build_rhs.cache_clear()
        build_rhs(args.rhs_k)

    def mc_int():
        mc_estimate((1, 2, 3), args.samples, seed=1)

    def mc_rational():
        mc_estimate(("1/2", "3/2"), args.samples // 4, seed=1)

    return [
        (f"verify_symbolic k={args.k}", symbolic),
        (f"build_rhs k={args.rhs_k}", rhs_expand),
        (f"mc a=1,2,3 n={args.samples}", mc_int),
        (f"mc a=1/2,3/2 n={args.samples // 4}", mc_rational),
    ]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--rhs-k", type=int, default=7)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    names = backend.available()
    if "cython" not in names:
        print("note: compiled extension not built, timing the fallback only", file=sys.stderr)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["task", "backend", "best_seconds", "speedup_vs_python"])
    for title, fn in tasks(args):
        times = {}
        for name in names:
            with backend.using(name):
                times[name] = best_of(fn, args.repeat)
        for name in names:
            w.writerow([title, name, f"{times[name]:.4f}", f"{times['python'] / times[name]:.2f}"])
        sys.stdout.flush()


if __name__ == "__main__":
    main()
