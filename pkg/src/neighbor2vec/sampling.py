"""Training-corpus generation.

The main strategy samples, for every center node, a sentence made of the
center followed by its shuffled one-hop neighbors, topped up from the
two-hop frontier when the one-hop set is smaller than the cap.  No walks are
simulated; each sentence touches at most two hops.  A uniform random-walk
generator is included as a comparison baseline.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DataError
from .graph import Graph
from .parallel import run_sharded

log = logging.getLogger(__name__)


@dataclass
class Corpus:
    """A batch of sentences in a padded token table.

    ``tokens[i, :lengths[i]]`` is sentence i; the first entry is the center
    node, the padding value is -1.  ``distinct_tails`` is False for
    random-walk corpora, whose sentences may revisit nodes.
    """

    tokens: np.ndarray
    lengths: np.ndarray
    num_nodes: int
    num: int
    n_sample: int
    seed: int
    distinct_tails: bool = True

    def __len__(self) -> int:
        return len(self.lengths)

    @property
    def width(self) -> int:
        return self.tokens.shape[1]

    @property
    def total_tokens(self) -> int:
        return int(self.lengths.sum())

    def sentences(self):
        for i in range(len(self.lengths)):
            yield self.tokens[i, : self.lengths[i]]

    def save_text(self, path) -> None:
        """One sentence per line, space-separated node ids."""
        with open(path, "w", encoding="utf-8") as fh:
            for sent in self.sentences():
                fh.write(" ".join(str(int(t)) for t in sent))
                fh.write("\n")


def default_num(g: Graph) -> int:
    """Neighbor cap when none is given: max(8, ceil(average degree))."""
    return max(8, math.ceil(g.average_degree()))


def _resolve_seed(seed) -> int:
    return int(seed) % kernels.M31


def sample_neighborhood(g: Graph, v: int, num: int, rng) -> np.ndarray:
    """Sample one sentence for center ``v`` (hop-prioritized, two-hop cap).

    ``rng`` is either an integer seed or a ``numpy.random.Generator`` used to
    draw one.  Returns the sentence as an int32 array, center first; an
    isolated center yields the singleton ``[v]``.
    """
    if num < 1:
        raise ValueError("num must be >= 1")
    g._check_node(v)
    if isinstance(rng, np.random.Generator):
        seed = int(rng.integers(1, kernels.M31))
    else:
        seed = _resolve_seed(rng)
    tokens = np.full((1, num + 1), -1, np.int32)
    lengths = np.zeros(1, np.int32)
    offsets, targets, _ = g.adjacency("out")
    kernels.sample_sentences(offsets, targets, num, 1, seed, tokens, lengths, v, v + 1, v)
    return tokens[0, : lengths[0]].copy()


def generate_corpus(
    g: Graph,
    num: int | None = None,
    n_sample: int = 1,
    seed: int = 0,
    threads: int = 1,
) -> Corpus:
    """Run ``n_sample`` sampling rounds over every node of the graph.

    Every node with at least one neighbor contributes exactly ``n_sample``
    sentences; isolated nodes contribute none.  Output is identical for any
    thread count: each (node, round) pair has its own sub-seeded stream and
    its own output row.
    """
    if g.num_nodes == 0:
        raise DataError("cannot sample an empty graph")
    if n_sample < 1:
        raise ValueError("n_sample must be >= 1")
    if num is None:
        num = default_num(g)
        log.info("corpus: avg degree %.2f -> num=%d", g.average_degree(), num)
    if num < 1:
        raise ValueError("num must be >= 1")

    kseed = _resolve_seed(seed)
    rows = g.num_nodes * n_sample
    tokens = np.full((rows, num + 1), -1, np.int32)
    lengths = np.zeros(rows, np.int32)
    offsets, targets, _ = g.adjacency("out")

    def worker(_slot, start, end):
        kernels.sample_sentences(offsets, targets, num, n_sample, kseed, tokens, lengths, start, end, 0)

    run_sharded(worker, g.num_nodes, threads)

    keep = lengths >= 2
    return Corpus(
        tokens=tokens[keep],
        lengths=lengths[keep],
        num_nodes=g.num_nodes,
        num=num,
        n_sample=n_sample,
        seed=int(seed),
    )


def baseline_random_walk_corpus(
    g: Graph,
    walk_len: int,
    walks_per_node: int,
    seed: int = 0,
    threads: int = 1,
) -> Corpus:
    """Uniform random-walk corpus (comparison baseline).

    Walks are restart-free and truncate at sinks; walks that cannot take a
    single step (isolated starts) are dropped, like any other sub-2-token
    sentence.  Sentences may repeat nodes, so ``distinct_tails`` is False.
    """
    if g.num_nodes == 0:
        raise DataError("cannot sample an empty graph")
    if walk_len < 2:
        raise ValueError("walk_len must be >= 2")
    if walks_per_node < 1:
        raise ValueError("walks_per_node must be >= 1")

    kseed = _resolve_seed(seed)
    rows = g.num_nodes * walks_per_node
    tokens = np.full((rows, walk_len), -1, np.int32)
    lengths = np.zeros(rows, np.int32)
    offsets, targets, _ = g.adjacency("out")

    def worker(_slot, start, end):
        kernels.random_walk_sentences(
            offsets, targets, walk_len, walks_per_node, kseed, tokens, lengths, start, end, 0
        )

    run_sharded(worker, g.num_nodes, threads)

    keep = lengths >= 2
    return Corpus(
        tokens=tokens[keep],
        lengths=lengths[keep],
        num_nodes=g.num_nodes,
        num=walk_len - 1,
        n_sample=walks_per_node,
        seed=int(seed),
        distinct_tails=False,
    )
