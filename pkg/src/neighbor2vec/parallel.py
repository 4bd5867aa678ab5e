"""Thread-sharding helpers for the GIL-releasing kernels."""

import os
import threading

import numpy as np

THREADS_ENV = "NEIGHBOR2VEC_THREADS"


def default_threads() -> int:
    """Thread count from NEIGHBOR2VEC_THREADS, defaulting to 1."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    n = int(raw)
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be >= 1, got {n}")
    return n


def shard_bounds(total: int, shards: int) -> np.ndarray:
    """Split [0, total) into ``shards`` near-equal contiguous ranges."""
    return np.linspace(0, total, shards + 1).astype(np.int64)


def run_sharded(worker, total: int, threads: int) -> None:
    """Run ``worker(shard_index, start, end)`` over a partition of [0, total).

    With ``threads == 1`` the worker is called inline (fully deterministic);
    otherwise one OS thread per shard.  Workers are expected to spend their
    time inside nogil kernels.
    """
    if threads <= 1 or total <= 1:
        worker(0, 0, total)
        return
    bounds = shard_bounds(total, threads)
    ts = [
        threading.Thread(target=worker, args=(i, int(bounds[i]), int(bounds[i + 1])))
        for i in range(threads)
    ]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
