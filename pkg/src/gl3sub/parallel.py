"""Deterministic parallel map with a sorted-key reduction."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Hashable, Iterable


def default_workers() -> int:
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1))


def keyed_map(fn: Callable, items: Iterable[tuple[Hashable, object]], workers: int = 1) -> dict:
    """{key: fn(arg)} for (key, arg) pairs; ``fn`` must be picklable when ``workers`` > 1."""
    items = list(items)
    keys = [k for k, _ in items]
    if len(set(keys)) != len(keys):
        raise ValueError("duplicate keys")
    args = [a for _, a in items]
    if workers <= 1 or len(items) <= 1:
        values = [fn(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(fn, args, chunksize=max(1, len(args) // (4 * workers))))
    return dict(zip(keys, values))


def ordered_sum(values: dict) -> complex:
    """Correctly rounded sum of complex values in sorted-key order, independent of arrival order."""
    ordered = [complex(values[k]) for k in sorted(values)]
    return complex(math.fsum(v.real for v in ordered), math.fsum(v.imag for v in ordered))
