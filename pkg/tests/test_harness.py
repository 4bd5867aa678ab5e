import numpy as np
import pytest

from neighbor2vec import (
    DataError,
    LinkTask,
    MlpConfig,
    NodeLabelTask,
    from_edges,
    run_link_prediction,
    run_node_classification,
    sample_non_edges,
    stratified_split,
)
from neighbor2vec.synth import erdos_renyi

FAST = MlpConfig(hidden_dims=(16, 16), dropout=0.0, epochs=20, batch=64, seed=0)


def labeled_task(n, rng, num_classes=2):
    labels = rng.integers(0, num_classes, n)
    ids = np.arange(n)
    train = ids[: n // 2]
    test = ids[n // 2 :]
    return NodeLabelTask(labels=labels, splits={"train": train, "test": test}, num_classes=num_classes)


def test_perfect_features_reach_one():
    rng = np.random.default_rng(0)
    n = 60
    g = erdos_renyi(n, 0.1, seed=0)
    task = labeled_task(n, rng)
    onehot = np.eye(2, dtype=np.float32)[task.labels]
    cfg = MlpConfig(hidden_dims=(16, 16), dropout=0.0, epochs=100, lr=0.01, batch=64, seed=0)
    report = run_node_classification(g, onehot, task, cfg, runs=2)
    assert report["mean"] == 1.0
    assert report["metric"] == "accuracy"


def test_runs_one_single_eval():
    rng = np.random.default_rng(1)
    n = 40
    g = erdos_renyi(n, 0.1, seed=1)
    task = labeled_task(n, rng)
    features = rng.normal(size=(n, 8)).astype(np.float32)
    report = run_node_classification(g, features, task, FAST, runs=1)
    assert report["std"] == 0.0
    assert len(report["values"]) == 1


def test_constant_features_majority_rate():
    rng = np.random.default_rng(2)
    n = 200
    g = erdos_renyi(n, 0.05, seed=2)
    labels = np.array([0] * 150 + [1] * 50)
    ids = rng.permutation(n)
    task = NodeLabelTask(
        labels=labels, splits={"train": ids[:100], "test": ids[100:]}, num_classes=2
    )
    features = np.ones((n, 4), np.float32)
    report = run_node_classification(g, features, task, FAST, runs=3)
    majority = max(np.mean(labels[ids[100:]] == 0), np.mean(labels[ids[100:]] == 1))
    assert abs(report["mean"] - majority) < 0.1


def test_task_validation_errors():
    labels = np.array([0, 1, -1, 1])
    with pytest.raises(DataError, match="unlabeled"):
        NodeLabelTask(labels, {"train": np.array([2])}, 2).validate(4)
    with pytest.raises(DataError, match="overlaps"):
        NodeLabelTask(labels, {"train": np.array([0]), "test": np.array([0])}, 2).validate(4)
    with pytest.raises(DataError, match="outside"):
        NodeLabelTask(labels, {"train": np.array([9])}, 2).validate(4)


def test_stratified_split_preserves_proportions():
    labels = np.array([0] * 80 + [1] * 20)
    train, test = stratified_split(labels, 0.5, seed=0)
    assert len(train) == len(test) == 50
    assert np.sum(labels[train] == 1) == 10
    assert len(np.intersect1d(train, test)) == 0


def test_sample_non_edges_avoids_edges_and_forbidden():
    g = from_edges([(0, 1), (1, 2), (2, 3)], num_nodes=6)
    rng = np.random.default_rng(0)
    forbid = [(0, 3)]
    out = sample_non_edges(g, 50, rng, forbid=forbid)
    for u, v in out:
        assert u != v
        assert not g.has_edge(int(u), int(v))
        assert (min(u, v), max(u, v)) != (0, 3)


def test_sample_non_edges_gives_up_on_dense():
    g = from_edges([(i, j) for i in range(5) for j in range(i + 1, 5)])
    with pytest.raises(DataError, match="non-edges"):
        sample_non_edges(g, 10, np.random.default_rng(0))


def link_setup(rng, n=40, d=8):
    g = erdos_renyi(n, 0.15, seed=3)
    edges = g.edge_array()
    rng.shuffle(edges)
    cut = len(edges) // 5
    test_pos = edges[:cut]
    train = edges[cut:]
    train_graph = from_edges(train, num_nodes=n)
    test_neg = sample_non_edges(g, cut, rng)
    return g, train_graph, train, test_pos, test_neg


def test_link_random_embeddings_auc_near_half():
    rng = np.random.default_rng(4)
    _, train_graph, train, test_pos, test_neg = link_setup(rng)
    task = LinkTask(train_edges=train, test_pos=test_pos, test_neg=test_neg, metric="roc_auc")
    m = rng.normal(size=(train_graph.num_nodes, 8)).astype(np.float32)
    report = run_link_prediction(train_graph, m, task, FAST, runs=5)
    assert abs(report["mean"] - 0.5) < 0.15


def test_link_metric_kinds():
    task = LinkTask(
        train_edges=np.array([[0, 1]]),
        test_pos=np.array([[2, 3]]),
        test_neg=np.array([[0, 3]]),
        metric="hits@7",
    )
    assert task.metric_kind() == ("hits", 7)
    task.metric = "mrr"
    assert task.metric_kind() == ("mrr", None)
    task.metric = "banana"
    with pytest.raises(DataError):
        task.metric_kind()


def test_link_task_validation():
    g = from_edges([(0, 1), (1, 2)])
    with pytest.raises(DataError, match="appears in train"):
        LinkTask(
            train_edges=np.array([[0, 1]]),
            test_pos=np.array([[1, 0]]),
            test_neg=np.array([[0, 2]]),
        ).validate(g)
    with pytest.raises(DataError, match="is an edge"):
        LinkTask(
            train_edges=np.array([[0, 1]]),
            test_pos=np.array([[0, 2]]),
            test_neg=np.array([[1, 2]]),
        ).validate(g)


def test_link_mrr_per_positive_candidates():
    rng = np.random.default_rng(5)
    _, train_graph, train, test_pos, test_neg = link_setup(rng)
    per_pos = np.stack([test_neg[: min(4, len(test_neg))] for _ in range(len(test_pos))])
    task = LinkTask(
        train_edges=train,
        test_pos=test_pos,
        test_neg=test_neg,
        test_neg_per_pos=per_pos,
        metric="mrr",
    )
    m = rng.normal(size=(train_graph.num_nodes, 8)).astype(np.float32)
    report = run_link_prediction(train_graph, m, task, FAST, runs=2)
    assert 0.0 < report["mean"] <= 1.0
    assert report["metric"] == "mrr"


def test_link_valid_selection_path():
    rng = np.random.default_rng(6)
    _, train_graph, train, test_pos, test_neg = link_setup(rng)
    half = len(test_pos) // 2
    task = LinkTask(
        train_edges=train,
        test_pos=test_pos[half:],
        test_neg=test_neg[half:],
        valid_pos=test_pos[:half],
        valid_neg=test_neg[:half],
        metric="roc_auc",
    )
    m = rng.normal(size=(train_graph.num_nodes, 8)).astype(np.float32)
    report = run_link_prediction(train_graph, m, task, FAST, runs=2)
    assert len(report["values"]) == 2


def test_report_shapes():
    rng = np.random.default_rng(7)
    n = 30
    g = erdos_renyi(n, 0.15, seed=7)
    task = labeled_task(n, rng)
    features = rng.normal(size=(n, 4)).astype(np.float32)
    report = run_node_classification(g, features, task, FAST, runs=3)
    assert set(report) >= {"metric", "mean", "std", "runs", "values", "config"}
    assert report["runs"] == 3
    assert report["config"]["hidden_dims"] == list(FAST.hidden_dims) or report["config"][
        "hidden_dims"
    ] == FAST.hidden_dims
