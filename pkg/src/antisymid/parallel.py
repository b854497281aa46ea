"""Deterministic fan-out over contiguous index ranges."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def chunk_ranges(n: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, n)) if n else 1
    step, extra = divmod(n, parts)
    out = []
    lo = 0
    for j in range(parts):
        hi = lo + step + (1 if j < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


def resolve_workers(workers: int | None) -> int:
    if workers is None or workers == 0:
        return os.cpu_count() or 1
    if workers < 0:
        raise ValueError("workers must be >= 0")
    return workers


def _star(args):
    fn, rest = args
    return fn(*rest)


def map_ordered(fn, arglist, workers: int = 1) -> list:
    """``[fn(*args) for args in arglist]``, optionally in a process pool; order kept."""
    workers = resolve_workers(workers)
    if workers <= 1 or len(arglist) <= 1:
        return [fn(*args) for args in arglist]
    with ProcessPoolExecutor(max_workers=min(workers, len(arglist))) as pool:
        return list(pool.map(_star, [(fn, args) for args in arglist]))
