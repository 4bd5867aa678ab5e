"""Skip-gram negative-sampling trainer over neighborhood sentences.

Within a sentence every ordered in-window pair of distinct positions is one
positive example; positions carry no meaning beyond the window cut, so with
the default full-sentence window every co-occurrence trains in both
directions.  Each positive draws ``negatives`` noise nodes from a
frequency^exponent table (draws equal to the positive context are
resampled).  The published embedding is the input matrix; the output/context
matrix is a training-time auxiliary.

Threading contract: single-threaded runs are bit-reproducible under a fixed
seed.  With more threads, workers partition sentences and update the shared
matrices without locks (hogwild); lost updates are tolerated and only
quality-level reproducibility holds.
"""

import logging
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DataError, NumericError
from .graph import Graph
from .parallel import run_sharded
from .sampling import Corpus

log = logging.getLogger(__name__)

#: mixing-offset constants keeping trainer RNG streams away from sampler ones
_THREAD_STREAM_BASE = 1000003
_EPOCH_STREAM_BASE = 0


@dataclass
class TrainConfig:
    dim: int = 128
    window: int | None = None  # None = full sentence
    negatives: int = 5
    alpha: float = 0.025
    min_alpha: float | None = None  # None = alpha * 0.004
    linear_decay: bool = True  # False = fixed alpha throughout
    epochs: int = 5
    noise_exponent: float = 0.75
    seed: int = 0
    threads: int = 1

    def validate(self) -> None:
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.negatives < 1:
            raise ValueError("negatives must be >= 1")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.window is not None and self.window < 1:
            raise ValueError("window must be >= 1 or None for full-sentence")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def resolved_min_alpha(self) -> float:
        return self.alpha * 0.004 if self.min_alpha is None else self.min_alpha


@dataclass
class NoiseTable:
    """Cumulative noise distribution over node ids.

    ``cum[i]`` is the cumulative probability through node i; nodes absent
    from the corpus occupy zero-width intervals and are never drawn.
    """

    cum: np.ndarray

    def probabilities(self) -> np.ndarray:
        return np.diff(self.cum, prepend=0.0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.searchsorted(self.cum, rng.random(size))


def build_noise_table(corpus: Corpus, exponent: float = 0.75) -> NoiseTable:
    """Noise distribution proportional to corpus token frequency^exponent."""
    flat = corpus.tokens.ravel()
    counts = np.bincount(flat[flat >= 0], minlength=corpus.num_nodes).astype(np.float64)
    weights = np.zeros_like(counts)
    nz = counts > 0
    weights[nz] = counts[nz] ** exponent
    total = weights.sum()
    if total <= 0:
        raise DataError("corpus has no tokens; cannot build a noise table")
    cum = np.cumsum(weights) / total
    cum[-1] = 1.0
    return NoiseTable(cum=cum)


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def sgns_loss_and_grads(center_vec, context_vec, negative_vecs):
    """Loss and exact analytic gradients for one positive-plus-noise example.

    loss = -log sigmoid(context . center) - sum_i log sigmoid(-neg_i . center)

    Returns ``(loss, (grad_center, grad_context, grad_negatives))``.
    """
    x = np.asarray(center_vec, np.float64)
    c = np.asarray(context_vec, np.float64)
    negs = np.asarray(negative_vecs, np.float64).reshape(-1, x.shape[0])
    if not (np.isfinite(x).all() and np.isfinite(c).all() and np.isfinite(negs).all()):
        raise NumericError("non-finite input vector")

    pos_dot = c @ x
    neg_dots = negs @ x
    loss = np.logaddexp(0.0, -pos_dot) + np.logaddexp(0.0, neg_dots).sum()

    g_pos = _sigmoid(pos_dot) - 1.0
    g_negs = _sigmoid(neg_dots)
    grad_center = g_pos * c + g_negs @ negs
    grad_context = g_pos * x
    grad_negatives = g_negs[:, None] * x[None, :]
    return float(loss), (grad_center, grad_context, grad_negatives)


def window_pair_count(lengths: np.ndarray, window: int) -> int:
    """Ordered in-window pairs of distinct positions, summed over sentences."""
    lengths = np.asarray(lengths, np.int64)
    m = np.minimum(window, lengths - 1)
    return int((2 * (m * lengths - m * (m + 1) // 2)).sum())


def init_matrices(num_nodes: int, dim: int, seed: int):
    """Input matrix ~ uniform(-0.5/dim, 0.5/dim) per entry; output all-zero."""
    rng = np.random.default_rng(seed)
    w_in = ((rng.random((num_nodes, dim)) - 0.5) / dim).astype(np.float32)
    w_out = np.zeros((num_nodes, dim), np.float32)
    return w_in, w_out


def train(corpus: Corpus, g: Graph, cfg: TrainConfig, stats_out: dict | None = None) -> np.ndarray:
    """Learn node embeddings from the corpus; returns the (n, dim) input matrix.

    Nodes absent from the corpus keep their random initialization.  With
    ``epochs=0`` the initialization is returned untouched.  Raises
    NumericError if training produces non-finite values.
    """
    cfg.validate()
    if len(corpus) == 0:
        raise DataError("empty corpus")
    if corpus.num_nodes != g.num_nodes:
        raise DataError(
            f"corpus was sampled from a {corpus.num_nodes}-node graph, got {g.num_nodes} nodes"
        )
    if int(corpus.tokens.max()) >= g.num_nodes:
        raise DataError("corpus contains node ids outside the graph")

    w_in, w_out = init_matrices(g.num_nodes, cfg.dim, cfg.seed)
    if cfg.epochs == 0:
        if stats_out is not None:
            stats_out.update(epoch_loss=[], total_pairs=0, window=0)
        return w_in

    noise = build_noise_table(corpus, cfg.noise_exponent)
    window = cfg.window if cfg.window is not None else corpus.width
    pairs_per_epoch = window_pair_count(corpus.lengths, window)
    total_pairs = max(1, cfg.epochs * pairs_per_epoch)
    min_alpha = cfg.resolved_min_alpha()
    kseed = int(cfg.seed) % kernels.M31

    progress = np.zeros(1, np.int64)
    epoch_loss = []
    for epoch in range(cfg.epochs):
        loss_out = np.zeros(cfg.threads)

        def worker(slot, start, end):
            state = kernels.mix_seed(kseed, _THREAD_STREAM_BASE + slot, _EPOCH_STREAM_BASE + epoch)
            kernels.sgns_train_shard(
                w_in,
                w_out,
                noise.cum,
                corpus.tokens,
                corpus.lengths,
                window,
                cfg.negatives,
                cfg.alpha,
                min_alpha,
                1 if cfg.linear_decay else 0,
                total_pairs,
                progress,
                state,
                loss_out,
                slot,
                start,
                end,
            )

        run_sharded(worker, len(corpus), cfg.threads)
        mean_loss = float(loss_out.sum()) / max(1, pairs_per_epoch)
        epoch_loss.append(mean_loss)
        if not np.isfinite(mean_loss):
            raise NumericError(f"non-finite training loss at epoch {epoch}")
        log.info("epoch %d/%d: mean pair loss %.5f", epoch + 1, cfg.epochs, mean_loss)

    if not np.isfinite(w_in).all() or not np.isfinite(w_out).all():
        raise NumericError("non-finite values in the trained matrices")
    if stats_out is not None:
        stats_out.update(epoch_loss=epoch_loss, total_pairs=total_pairs, window=window)
    return w_in


def neighborhood_softmax(g: Graph, matrix: np.ndarray, v: int, c: int) -> float:
    """Probability of neighbor c under a softmax restricted to N(v).

    Diagnostic only; training never evaluates this normalization.
    """
    ids, _ = g.neighbors(v, "out")
    if len(ids) == 0:
        raise DataError(f"node {v} has no neighbors")
    pos = np.nonzero(ids == c)[0]
    if len(pos) == 0:
        raise DataError(f"node {c} is not a neighbor of {v}")
    logits = np.asarray(matrix[ids], np.float64) @ np.asarray(matrix[v], np.float64)
    logits -= logits.max()
    e = np.exp(logits)
    return float(e[pos[0]] / e.sum())
