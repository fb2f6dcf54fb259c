"""Worker-count resolution and range-partitioned execution of nogil kernels."""

import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "DAGTOPO_THREADS"


def resolve_threads(threads=None):
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        if env:
            threads = int(env)
        else:
            threads = os.cpu_count() or 1
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    return threads


def split_ranges(total, parts):
    """Split ``range(total)`` into at most ``parts`` contiguous, nonempty ranges."""
    parts = max(1, min(parts, total))
    bounds = [total * i // parts for i in range(parts + 1)]
    return [(bounds[i], bounds[i + 1]) for i in range(parts) if bounds[i] < bounds[i + 1]]


def map_ranges(func, total, threads=None, chunks_per_thread=4):
    """Run ``func(lo, hi)`` over a partition of ``range(total)``.

    Results come back in range order, so any reduction done by the caller is
    independent of the worker count.
    """
    threads = resolve_threads(threads)
    if total == 0:
        return []
    parts = 1 if threads == 1 else threads * chunks_per_thread
    ranges = split_ranges(total, parts)
    if threads == 1 or len(ranges) == 1:
        return [func(lo, hi) for lo, hi in ranges]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda r: func(*r), ranges))
