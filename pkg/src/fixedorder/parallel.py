"""Worker-pool policy: how many processes, and an order-preserving map.

Modules take a ``mapper`` argument and stay policy-free; reductions are
done by the caller with ``math.fsum`` so the result does not depend on
how the work was split.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "NUM_THREADS"


def resolve_threads(threads: int | None = None) -> int:
    """--threads if given, else $NUM_THREADS, else 1."""
    if threads is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        threads = int(env) if env else 1
    if threads < 1:
        raise ValueError("thread count must be positive")
    return threads


def serial_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    return [fn(x) for x in items]


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1, chunksize: int = 8) -> list[R]:
    """map(fn, items) in input order, on a process pool when threads > 1."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return serial_map(fn, items)
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))


def make_mapper(threads: int | None = None) -> Callable:
    n = resolve_threads(threads)
    return lambda fn, items: parallel_map(fn, items, n)
