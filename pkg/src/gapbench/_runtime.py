"""Process-wide knobs: worker threads and the dense-solver cutoff."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from typing import Callable, Iterable, Iterator, TypeVar

DEFAULT_DENSE_THRESHOLD = 2048
DENSE_THRESHOLD_ENV = "GAPBENCH_DENSE_THRESHOLD"

# row-partitioned matvec only pays off past this many rows
PARALLEL_MIN_ROWS = 50_000

_threads = 1

T = TypeVar("T")
R = TypeVar("R")


def dense_threshold() -> int:
    raw = os.environ.get(DENSE_THRESHOLD_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_DENSE_THRESHOLD
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{DENSE_THRESHOLD_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{DENSE_THRESHOLD_ENV} must be positive, got {value}")
    return value


def get_threads() -> int:
    return _threads


def set_threads(k: int) -> None:
    global _threads
    if k < 1:
        raise ValueError(f"thread count must be >= 1, got {k}")
    _threads = int(k)


@contextmanager
def threads(k: int) -> Iterator[None]:
    old = _threads
    set_threads(k)
    try:
        yield
    finally:
        set_threads(old)


def ordered_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Map over ``items`` with up to ``get_threads()`` workers; output order follows input order."""
    items = list(items)
    if _threads == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=_threads) as pool:
        return list(pool.map(fn, items))
