"""Worker-count policy for replicate and chunk level parallelism."""

import os
from concurrent.futures import ThreadPoolExecutor

from .errors import ConfigurationError

THREADS_ENV = "EVIDENTIA_THREADS"


def worker_count() -> int:
    """Number of workers, capped by ``EVIDENTIA_THREADS`` when set."""
    n = os.cpu_count() or 1
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            cap_n = int(cap)
        except ValueError:
            raise ConfigurationError(f"{THREADS_ENV} must be a positive integer, got {cap!r}") from None
        if cap_n < 1:
            raise ConfigurationError(f"{THREADS_ENV} must be a positive integer, got {cap!r}")
        n = min(n, cap_n)
    return n


def ordered_map(fn, items):
    """``map`` over ``items`` with results in input order, whatever the scheduling."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
