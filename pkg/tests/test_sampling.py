import numpy as np
import pytest

from neighbor2vec import (
    DataError,
    baseline_random_walk_corpus,
    default_num,
    from_edges,
    generate_corpus,
    sample_neighborhood,
)
from neighbor2vec.synth import erdos_renyi


def bfs_hops(g, v):
    """Brute-force 1-hop and 2-hop closures of v, straight from neighbors()."""
    one = set(int(u) for u in g.neighbors(v)[0])
    two = set()
    for u in one:
        two.update(int(w) for w in g.neighbors(u)[0])
    two -= one
    two.discard(v)
    return one, two


def check_sentence_against_oracle(g, v, num, sent):
    """The spec'd truncation rules, checked with an independent BFS oracle."""
    assert sent[0] == v
    tail = [int(x) for x in sent[1:]]
    assert len(tail) == len(set(tail)) and v not in tail
    one, two = bfs_hops(g, v)
    if len(one) >= num:
        # hop priority: one-hop only, exactly num of them
        assert len(tail) == num and set(tail) <= one
    else:
        # all one-hop first, then a two-hop sample
        assert set(tail[: len(one)]) == one
        extra = set(tail[len(one) :])
        assert extra <= two
        assert len(tail) == min(num, len(one) + len(two))
    assert set(tail) <= one | two


def test_star_exactly_one_hop():
    g = from_edges([(4, 1), (4, 2), (4, 3), (4, 0)])
    sent = sample_neighborhood(g, 4, 4, 11)
    assert sent[0] == 4
    assert sorted(sent[1:]) == [0, 1, 2, 3]


def test_path_two_hop_fill():
    g = from_edges([(0, 1), (1, 2), (2, 3), (3, 4)])
    for seed in range(20):
        sent = sample_neighborhood(g, 2, 4, seed)
        assert set(int(x) for x in sent[1:3]) == {1, 3}
        assert set(int(x) for x in sent[3:]) == {0, 4}


def test_triangle_closure_exhausted():
    g = from_edges([(0, 1), (1, 2), (0, 2)])
    sent = sample_neighborhood(g, 0, 5, 3)
    assert len(sent) == 3
    assert set(int(x) for x in sent[1:]) == {1, 2}


def test_isolated_center_singleton():
    g = from_edges([(0, 1)], num_nodes=3)
    assert list(sample_neighborhood(g, 2, 4, 0)) == [2]


def test_oracle_suite_random_graphs():
    checked = 0
    for seed in range(100):
        n = 5 + seed % 46
        g = erdos_renyi(n, 0.05 + 0.3 * ((seed * 37 % 10) / 10), seed=seed)
        num = 1 + seed % 9
        for v in range(g.num_nodes):
            sent = sample_neighborhood(g, v, num, seed * 1009 + v)
            if len(sent) == 1:
                assert g.degree(v) == 0
                continue
            check_sentence_against_oracle(g, v, num, sent)
            checked += 1
    assert checked > 1000


def test_one_hop_shuffle_is_uniform():
    # first tail slot of a 3-leaf star should be ~uniform over the leaves
    g = from_edges([(0, 1), (0, 2), (0, 3)])
    counts = np.zeros(4)
    for seed in range(3000):
        counts[sample_neighborhood(g, 0, 3, seed)[1]] += 1
    expected = 1000
    assert np.all(np.abs(counts[1:] - expected) < 4 * np.sqrt(expected))


def test_corpus_counts_triangle():
    g = from_edges([(0, 1), (1, 2), (0, 2)])
    c = generate_corpus(g, num=2, n_sample=3, seed=5)
    assert len(c) == 9
    assert np.all(c.lengths == 3)
    centers = c.tokens[:, 0]
    assert np.array_equal(np.bincount(centers), [3, 3, 3])


def test_isolated_node_contributes_nothing():
    g = from_edges([(0, 1)], num_nodes=3)
    c = generate_corpus(g, num=4, n_sample=2, seed=0)
    assert len(c) == 4
    assert 2 not in c.tokens[:, 0]


def test_corpus_thread_count_invariance():
    g = erdos_renyi(100, 0.05, seed=9)
    a = generate_corpus(g, num=6, n_sample=2, seed=42, threads=1)
    b = generate_corpus(g, num=6, n_sample=2, seed=42, threads=4)
    assert np.array_equal(a.tokens, b.tokens)
    assert np.array_equal(a.lengths, b.lengths)


def test_corpus_run_to_run_determinism():
    g = erdos_renyi(60, 0.1, seed=2)
    a = generate_corpus(g, num=5, n_sample=3, seed=7)
    b = generate_corpus(g, num=5, n_sample=3, seed=7)
    assert np.array_equal(a.tokens, b.tokens)


def test_default_num_reported():
    g = erdos_renyi(50, 0.1, seed=1)
    c = generate_corpus(g, seed=0)
    assert c.num == default_num(g) == max(8, int(np.ceil(g.average_degree())))


def test_empty_graph_rejected():
    g = from_edges(np.empty((0, 2), np.int64))
    with pytest.raises(DataError):
        generate_corpus(g, num=4, n_sample=1, seed=0)


def test_generator_seed_accepted():
    g = from_edges([(0, 1), (1, 2)])
    rng = np.random.default_rng(3)
    sent = sample_neighborhood(g, 1, 2, rng)
    assert sorted(int(x) for x in sent[1:]) == [0, 2]


def test_single_edge_walks_alternate():
    g = from_edges([(0, 1)])
    c = baseline_random_walk_corpus(g, walk_len=3, walks_per_node=2, seed=4)
    for sent in c.sentences():
        s = [int(x) for x in sent]
        assert s in ([0, 1, 0], [1, 0, 1])


def test_walk_count():
    g = from_edges([(0, 1), (1, 2), (2, 3), (3, 4)])
    c = baseline_random_walk_corpus(g, walk_len=4, walks_per_node=2, seed=0)
    assert len(c) == 10
    assert not c.distinct_tails


def test_walks_truncate_at_sink():
    g = from_edges([(0, 1)], directed=True, num_nodes=2)
    c = baseline_random_walk_corpus(g, walk_len=5, walks_per_node=1, seed=0)
    # only node 0 can take a step; its walk stops at the sink 1
    assert len(c) == 1
    assert list(c.tokens[0, : c.lengths[0]]) == [0, 1]


def test_walk_next_step_frequencies_uniform():
    # center of a path: next step splits ~50/50 over its two neighbors
    g = from_edges([(0, 1), (1, 2)])
    hits = np.zeros(3)
    trials = 10000
    for seed in range(trials):
        c = baseline_random_walk_corpus(g, walk_len=2, walks_per_node=1, seed=seed)
        start_1 = c.tokens[c.tokens[:, 0] == 1]
        hits[start_1[0, 1]] += 1
    p = 0.5
    sigma = np.sqrt(trials * p * (1 - p))
    assert abs(hits[0] - trials * p) < 3 * sigma
    assert hits[1] == 0


def test_walk_corpus_threads_invariant():
    g = erdos_renyi(80, 0.06, seed=5)
    a = baseline_random_walk_corpus(g, 10, 2, seed=3, threads=1)
    b = baseline_random_walk_corpus(g, 10, 2, seed=3, threads=3)
    assert np.array_equal(a.tokens, b.tokens)
