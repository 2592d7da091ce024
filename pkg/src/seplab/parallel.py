"""Order-preserving worker pools.

All sweeps are pure functions of their items, so parallel execution only has
to preserve input order to make output independent of the worker count.  The
reported counterexample of a sweep is always the item-index-minimal one.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_CHUNK = 256


def default_jobs() -> int:
    return min(4, os.cpu_count() or 1)


def pmap(fn: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> list[R]:
    """``list(map(fn, items))`` with optional process workers; order preserved."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunk = max(1, min(_CHUNK, len(items) // (jobs * 4) + 1))
        return list(pool.map(fn, items, chunksize=chunk))


def _scan_chunk(args):
    fn, base, chunk = args
    for offset, item in enumerate(chunk):
        result = fn(item)
        if result is not None:
            return (base + offset, result)
    return None


def first_hit(fn: Callable[[T], R | None], items: Sequence[T], jobs: int = 1):
    """First ``(index, fn(item))`` with a non-None result, in item order.

    With several workers the chunks are evaluated out of order but reduced in
    order, so the returned hit is identical to the sequential one.
    """
    if jobs <= 1:
        for index, item in enumerate(items):
            result = fn(item)
            if result is not None:
                return (index, result)
        return None
    tasks = [
        (fn, base, items[base : base + _CHUNK]) for base in range(0, len(items), _CHUNK)
    ]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for hit in pool.map(_scan_chunk, tasks):
            if hit is not None:
                return hit
    return None
