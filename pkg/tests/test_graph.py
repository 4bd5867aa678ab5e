import numpy as np
import pytest

from neighbor2vec import FormatError, IngestOptions, from_edges, load_edge_list, save_edge_list
from neighbor2vec.synth import erdos_renyi


def write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n")


def test_two_edge_path(tmp_path):
    p = tmp_path / "g.txt"
    write_lines(p, ["0 1", "1 2"])
    g = load_edge_list(p)
    assert g.num_nodes == 3
    assert g.num_edges == 2
    ids, w = g.neighbors(1)
    assert set(ids) == {0, 2}
    assert np.all(w == 1.0)


def test_dedupe_and_self_loop(tmp_path):
    p = tmp_path / "g.txt"
    write_lines(p, ["0 1", "0 1", "2 2"])
    g = load_edge_list(p)
    assert g.num_nodes == 3
    assert g.num_edges == 1
    assert g.degree(2) == 0


def test_dedupe_off_raises(tmp_path):
    p = tmp_path / "g.txt"
    write_lines(p, ["0 1", "1 0"])
    with pytest.raises(FormatError, match="duplicate"):
        load_edge_list(p, IngestOptions(dedupe=False))


def test_undirected_duplicate_reversed_merges(tmp_path):
    p = tmp_path / "g.txt"
    write_lines(p, ["0 1", "1 0"])
    g = load_edge_list(p)
    assert g.num_edges == 1


def test_comments_and_blank_lines(tmp_path):
    p = tmp_path / "g.txt"
    write_lines(p, ["# header", "", "0 1", "# trailing"])
    assert load_edge_list(p).num_edges == 1


def test_weighted_passthrough_and_merge(tmp_path):
    p = tmp_path / "g.txt"
    write_lines(p, ["0 1 2.5", "1 2 1.0", "2 1 0.5"])
    g = load_edge_list(p, IngestOptions(weighted=True))
    ids, w = g.neighbors(0)
    assert list(ids) == [1] and w[0] == 2.5
    ids, w = g.neighbors(2)
    assert w[0] == 1.5  # 1.0 + 0.5 merged


def test_directed_transpose_semantics(tmp_path):
    p = tmp_path / "g.txt"
    write_lines(p, ["0 1", "2 1"])
    g = load_edge_list(p, IngestOptions(directed=True))
    assert set(g.neighbors(1, "in")[0]) == {0, 2}
    assert len(g.neighbors(1, "out")[0]) == 0
    assert g.degree(1, "in") == 2


@pytest.mark.parametrize(
    "lines,msg",
    [
        (["0"], "expected"),
        (["0 x"], "non-integer"),
        (["0 1 -2"], "non-negative"),
        (["-1 2"], "negative node id"),
    ],
)
def test_malformed_lines_report_lineno(tmp_path, lines, msg):
    p = tmp_path / "g.txt"
    write_lines(p, ["0 1 1.0"] + lines)
    with pytest.raises(FormatError, match=f"2: .*{msg}|{msg}"):
        load_edge_list(p, IngestOptions(weighted=True))


def test_weighted_flag_missing_column(tmp_path):
    p = tmp_path / "g.txt"
    write_lines(p, ["0 1"])
    with pytest.raises(FormatError, match="no weight column"):
        load_edge_list(p, IngestOptions(weighted=True))


def test_unreadable_file(tmp_path):
    with pytest.raises(FormatError, match="cannot read"):
        load_edge_list(tmp_path / "missing.txt")


def test_star_and_isolated_degrees():
    g = from_edges([(0, 1), (0, 2), (0, 3), (0, 4)], num_nodes=6)
    assert g.degree(0) == 4
    assert g.degree(5) == 0


def test_degree_matches_recount_on_er_graph():
    rng = np.random.default_rng(7)
    n, p = 50, 0.2
    mask = np.triu(rng.random((n, n)) < p, k=1)
    edges = np.argwhere(mask)
    g = from_edges(edges, num_nodes=n)
    # independent recount straight from the raw edge list
    recount = np.zeros(n, np.int64)
    for u, v in edges:
        recount[u] += 1
        recount[v] += 1
    assert np.array_equal(g.degrees(), recount)


def test_degree_sum_identity():
    for seed in range(5):
        g = erdos_renyi(40, 0.15, seed=seed)
        assert int(g.degrees().sum()) == len(g.out_targets) == 2 * g.num_edges


def test_round_trip(tmp_path):
    for seed, weighted in [(0, False), (1, True)]:
        g = erdos_renyi(30, 0.2, seed=seed)
        if weighted:
            rng = np.random.default_rng(seed)
            edges = g.edge_array()
            g = from_edges(edges, weights=rng.random(len(edges)) + 0.5, num_nodes=30)
        p = tmp_path / f"rt{seed}.txt"
        save_edge_list(g, p)
        g2 = load_edge_list(p, IngestOptions(weighted=weighted))
        assert g2.num_nodes == g.num_nodes
        assert np.array_equal(g2.out_offsets, g.out_offsets)
        assert np.array_equal(g2.out_targets, g.out_targets)
        if weighted:
            assert np.allclose(g2.out_weights, g.out_weights)


def test_directed_transpose_property():
    for seed in range(10):
        g = erdos_renyi(60, 0.08, seed=seed, directed=True)
        for u in range(g.num_nodes):
            for v in g.neighbors(u, "out")[0]:
                assert u in g.neighbors(int(v), "in")[0]
        assert len(g.in_targets) == len(g.out_targets)


def test_invariants_offsets():
    g = erdos_renyi(25, 0.3, seed=3)
    assert g.out_offsets[0] == 0
    assert g.out_offsets[-1] == len(g.out_targets)
    assert np.all(np.diff(g.out_offsets) >= 0)
    assert g.out_targets.min() >= 0 and g.out_targets.max() < g.num_nodes
    # no self-loops, no duplicates within a slice
    for v in range(g.num_nodes):
        ids, _ = g.neighbors(v)
        assert v not in ids
        assert len(set(ids.tolist())) == len(ids)


def test_node_out_of_range():
    g = from_edges([(0, 1)])
    with pytest.raises(IndexError):
        g.neighbors(2)
    with pytest.raises(IndexError):
        g.degree(-1)
