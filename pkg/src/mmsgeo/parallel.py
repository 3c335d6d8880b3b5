"""Deterministic worker pool.

Per-item work in this package is pure, so results are written back by
index and the output is identical for any worker count. ``set_workers``
is the single knob the CLI exposes.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

_workers = 1


def set_workers(n: int):
    global _workers
    _workers = max(1, int(n))


def get_workers() -> int:
    return _workers


def pmap(fn, items):
    """Ordered map over items using the configured worker count."""
    items = list(items)
    if _workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=_workers) as pool:
        return list(pool.map(fn, items))
