"""Post-training smoothing by neighbor aggregation.

Each iteration rebuilds every row from the previous iteration's matrix
(synchronous / Jacobi semantics, so processing order is irrelevant):

    new[v] = (1 - r) * old[v] + r * aggregate(old[neighbors(v)])

Directed graphs aggregate over in-neighbors; nodes with no (in-)neighbors
pass through unchanged.  The average aggregator takes the edge-weight-
normalized mean; the attention aggregator weights neighbors by a softmax of
their dot products with the center row (edge weights multiply the
exponentials) and is flagged experimental.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import FormatError
from .graph import Graph
from .parallel import run_sharded

_EMPTY_WEIGHTS = np.empty(0, np.float64)

METHODS = ("average", "attention")


@dataclass
class PropagationConfig:
    rate: float = 0.1
    iterations: int = 1
    method: str = "average"

    def validate(self) -> None:
        if not 0.0 <= self.rate <= 1.0:
            raise ValueError("rate must be in [0, 1]")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")


def _aggregation_arrays(g: Graph):
    offsets, targets, weights = g.adjacency("in" if g.directed else "out")
    if weights is None:
        return offsets, targets, _EMPTY_WEIGHTS, 0
    return offsets, targets, np.asarray(weights, np.float64), 1


def aggregate_average(g: Graph, v: int, matrix: np.ndarray) -> np.ndarray:
    """Edge-weight-normalized mean of v's (in-)neighbor rows.

    Returns matrix[v] itself when v has no neighbors or only zero weights.
    """
    ids, w = g.neighbors(v, "in" if g.directed else "out")
    if len(ids) == 0 or w.sum() <= 0:
        return np.asarray(matrix[v], np.float64).copy()
    w = np.asarray(w, np.float64)
    rows = np.asarray(matrix[ids], np.float64)
    return (w[:, None] * rows).sum(axis=0) / w.sum()


def aggregate_attention(g: Graph, v: int, matrix: np.ndarray) -> np.ndarray:
    """Convex combination of neighbor rows, softmax-weighted by similarity.

    Logits are dot(matrix[v], matrix[u]); edge weights scale the
    exponentials and the result is renormalized.
    """
    ids, w = g.neighbors(v, "in" if g.directed else "out")
    if len(ids) == 0:
        return np.asarray(matrix[v], np.float64).copy()
    rows = np.asarray(matrix[ids], np.float64)
    logits = rows @ np.asarray(matrix[v], np.float64)
    e = np.asarray(w, np.float64) * np.exp(logits - logits.max())
    total = e.sum()
    if total <= 0:
        return np.asarray(matrix[v], np.float64).copy()
    return (e[:, None] * rows).sum(axis=0) / total


def propagate(g: Graph, matrix: np.ndarray, cfg: PropagationConfig, threads: int = 1) -> np.ndarray:
    """Apply cfg.iterations synchronous smoothing steps; input is untouched.

    rate == 0 or iterations == 0 return an exact copy of the input.
    """
    cfg.validate()
    matrix = np.asarray(matrix, np.float32)
    if matrix.ndim != 2 or matrix.shape[0] != g.num_nodes:
        raise FormatError(
            f"matrix has {matrix.shape[0] if matrix.ndim == 2 else '?'} rows, graph has {g.num_nodes} nodes"
        )
    if cfg.iterations == 0 or cfg.rate == 0.0:
        return matrix.copy()

    offsets, targets, weights, has_w = _aggregation_arrays(g)
    kernel = (
        kernels.propagate_average_rows
        if cfg.method == "average"
        else kernels.propagate_attention_rows
    )
    src = matrix.copy()
    dst = np.empty_like(src)
    for _ in range(cfg.iterations):

        def worker(_slot, start, end):
            kernel(offsets, targets, weights, has_w, cfg.rate, src, dst, start, end)

        run_sharded(worker, g.num_nodes, threads)
        src, dst = dst, src
    return src
