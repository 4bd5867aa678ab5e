"""Timing harness: thread scaling, node-count scaling and backend comparison.

All timed sections run after :func:`kernels.warm_up`, so JIT compilation
never lands inside a measurement.  Corpus generation is timed as the median
of ``repeats`` runs; training (much longer) is timed once per setting.
"""

import time
from dataclasses import replace

import numpy as np

from . import kernels
from .graph import Graph
from .sampling import generate_corpus
from .synth import preferential_attachment
from .trainer import TrainConfig, train


def _median_time(fn, repeats: int) -> float:
    times = []
    for _ in range(max(1, repeats)):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def bench_embed(
    g: Graph,
    thread_list,
    train_cfg: TrainConfig,
    num: int | None = None,
    n_sample: int = 1,
    seed: int = 0,
    repeats: int = 3,
) -> list:
    """Corpus-generation and training wall-clock per thread count.

    The same input and seed are used for every thread count, so rows are
    directly comparable.
    """
    kernels.warm_up()
    rows = []
    for threads in thread_list:
        corpus_s = _median_time(
            lambda: generate_corpus(g, num=num, n_sample=n_sample, seed=seed, threads=threads),
            repeats,
        )
        corpus = generate_corpus(g, num=num, n_sample=n_sample, seed=seed, threads=threads)
        cfg = replace(train_cfg, threads=threads)
        t0 = time.perf_counter()
        train(corpus, g, cfg)
        train_s = time.perf_counter() - t0
        rows.append(
            {
                "threads": int(threads),
                "backend": kernels.BACKEND,
                "corpus_s": corpus_s,
                "train_s": train_s,
                "total_s": corpus_s + train_s,
            }
        )
    return rows


def bench_corpus_scaling(
    node_sizes,
    attach_m: int = 5,
    num: int | None = None,
    n_sample: int = 1,
    seed: int = 0,
    threads: int = 1,
    repeats: int = 3,
) -> list:
    """Corpus-generation time across synthetic graphs of growing node count
    at fixed average degree (preferential attachment with ``attach_m``)."""
    kernels.warm_up()
    rows = []
    for n in node_sizes:
        g = preferential_attachment(int(n), attach_m, seed=seed)
        corpus_s = _median_time(
            lambda g=g: generate_corpus(g, num=num, n_sample=n_sample, seed=seed, threads=threads),
            repeats,
        )
        rows.append({"nodes": int(n), "corpus_s": corpus_s})
    return rows


def linear_r2(x, y) -> float:
    """R-squared of the least-squares line through (x, y)."""
    x = np.asarray(x, np.float64)
    y = np.asarray(y, np.float64)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    total = ((y - y.mean()) ** 2).sum()
    if total == 0:
        return 1.0
    return float(1.0 - (resid**2).sum() / total)


def compare_backends(
    g: Graph,
    backends,
    thread_list,
    train_cfg: TrainConfig,
    num: int | None = None,
    n_sample: int = 1,
    seed: int = 0,
    repeats: int = 3,
) -> list:
    """bench_embed under each backend; the numpy backend is orders of
    magnitude slower, so size inputs accordingly."""
    original = kernels.BACKEND
    rows = []
    try:
        for backend in backends:
            kernels.set_backend(backend)
            rows.extend(
                bench_embed(
                    g,
                    thread_list,
                    train_cfg,
                    num=num,
                    n_sample=n_sample,
                    seed=seed,
                    repeats=repeats,
                )
            )
    finally:
        kernels.set_backend(original)
    return rows
