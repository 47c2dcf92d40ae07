"""Order-preserving parallel map capped by ``PBERG_THREADS``."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

from .errors import ConfigError


def worker_count() -> int:
    """Workers allowed by ``PBERG_THREADS`` (default 1, never above the CPU count)."""
    raw = os.environ.get("PBERG_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"PBERG_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"PBERG_THREADS must be a positive integer, got {raw!r}")
    return min(n, os.cpu_count() or 1)


def pmap(fn, items, workers: int | None = None) -> list:
    """``[fn(x) for x in items]``, possibly in worker processes.

    Results come back in input order whatever the scheduling, so anything
    assembled from them is reproducible.  ``fn`` must be picklable.
    """
    items = list(items)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
