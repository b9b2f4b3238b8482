"""Optional thread parallelism, capped by the HC_THREADS environment variable.

Results are always collected in input order, and tasks never share mutable
state or random generators, so output is identical at any thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def worker_cap() -> int:
    raw = os.environ.get("HC_THREADS")
    if raw is None:
        return 1
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap < 1:
        raise ValueError(f"HC_THREADS must be a positive integer, got {raw!r}")
    return cap


def pmap(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    work = list(items)
    cap = worker_cap()
    if cap <= 1 or len(work) <= 1:
        return [fn(item) for item in work]
    with ThreadPoolExecutor(max_workers=min(cap, len(work))) as pool:
        return list(pool.map(fn, work))
