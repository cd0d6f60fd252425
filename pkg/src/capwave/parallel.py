"""Deterministic worker-pool mapping for parameter sweeps.

Sweep points are independent; results come back in submission order so the
output of a sweep never depends on the pool size.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

__all__ = ["default_jobs", "map_ordered"]


def default_jobs() -> int:
    env = os.environ.get("CAPWAVE_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def map_ordered(fn, items, jobs: int = 1) -> list:
    """Apply fn over items, optionally on a process pool, preserving order."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))
