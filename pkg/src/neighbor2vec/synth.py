"""Synthetic graph generators and small bundled datasets for tests and
benchmarks."""

import numpy as np

from .graph import Graph, from_edges

# Zachary's karate club: 34 members, 78 ties, and the historical two-faction
# split (0 = instructor's side, 1 = administrator's side).
KARATE_EDGES = np.array(
    [
        (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8),
        (0, 10), (0, 11), (0, 12), (0, 13), (0, 17), (0, 19), (0, 21), (0, 31),
        (1, 2), (1, 3), (1, 7), (1, 13), (1, 17), (1, 19), (1, 21), (1, 30),
        (2, 3), (2, 7), (2, 8), (2, 9), (2, 13), (2, 27), (2, 28), (2, 32),
        (3, 7), (3, 12), (3, 13), (4, 6), (4, 10), (5, 6), (5, 10), (5, 16),
        (6, 16), (8, 30), (8, 32), (8, 33), (9, 33), (13, 33), (14, 32), (14, 33),
        (15, 32), (15, 33), (18, 32), (18, 33), (19, 33), (20, 32), (20, 33), (22, 32),
        (22, 33), (23, 25), (23, 27), (23, 29), (23, 32), (23, 33), (24, 25), (24, 27),
        (24, 31), (25, 31), (26, 29), (26, 33), (27, 33), (28, 31), (28, 33), (29, 32),
        (29, 33), (30, 32), (30, 33), (31, 32), (31, 33), (32, 33),
    ],
    np.int64,
)

KARATE_LABELS = np.array(
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 1,
     1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    np.int64,
)


def karate_club() -> Graph:
    return from_edges(KARATE_EDGES)


def erdos_renyi(n: int, p: float, seed: int = 0, directed: bool = False) -> Graph:
    """G(n, p) random graph."""
    rng = np.random.default_rng(seed)
    mask = rng.random((n, n)) < p
    if directed:
        np.fill_diagonal(mask, False)
        edges = np.argwhere(mask)
    else:
        edges = np.argwhere(np.triu(mask, k=1))
    return from_edges(edges.astype(np.int64), directed=directed, num_nodes=n)


def preferential_attachment(n: int, m: int, seed: int = 0) -> Graph:
    """Barabási–Albert graph: each new node attaches to m existing ones,
    chosen proportionally to degree (with an m-clique core)."""
    if n <= m:
        raise ValueError("need n > m")
    rng = np.random.default_rng(seed)
    src, dst = [], []
    # endpoint pool; picking uniformly from it is degree-proportional choice
    pool = []
    for u in range(m + 1):
        for v in range(u + 1, m + 1):
            src.append(u)
            dst.append(v)
            pool.append(u)
            pool.append(v)
    pool = list(pool)
    for v in range(m + 1, n):
        chosen = set()
        while len(chosen) < m:
            chosen.add(pool[rng.integers(len(pool))])
        for u in chosen:
            src.append(u)
            dst.append(v)
            pool.append(u)
            pool.append(v)
    edges = np.column_stack([src, dst]).astype(np.int64)
    return from_edges(edges, num_nodes=n)


def ring_of_cliques(num_cliques: int, clique_size: int) -> Graph:
    """num_cliques fully connected groups, consecutive cliques bridged by
    one edge."""
    edges = []
    for c in range(num_cliques):
        base = c * clique_size
        for i in range(clique_size):
            for j in range(i + 1, clique_size):
                edges.append((base + i, base + j))
    for c in range(num_cliques):
        u = c * clique_size
        v = ((c + 1) % num_cliques) * clique_size + 1
        edges.append((u, v))
    return from_edges(np.array(edges, np.int64))


def intra_clique_edges(num_cliques: int, clique_size: int) -> np.ndarray:
    """The clique-internal edges of ring_of_cliques, as an (E, 2) array."""
    edges = []
    for c in range(num_cliques):
        base = c * clique_size
        for i in range(clique_size):
            for j in range(i + 1, clique_size):
                edges.append((base + i, base + j))
    return np.array(edges, np.int64)
