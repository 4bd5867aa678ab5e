"""Downstream evaluation protocols.

Both entry points repeat train/evaluate ``runs`` times with independent
sub-seeds and report the mean and standard deviation of the task metric on
the test split.  Model selection uses the validation metric when a
validation split exists, otherwise the final epoch.
"""

from dataclasses import asdict, replace

import numpy as np

from . import kernels
from .errors import DataError
from .graph import Graph
from .metrics import edge_features, evaluate_accuracy, evaluate_roc_auc, hits_at_k, mrr
from .mlp import MlpConfig, train_mlp
from .tasks import LinkTask, NodeLabelTask, sample_non_edges

#: mixing-offset constant for per-run seeds
_RUN_STREAM_BASE = 8191


def run_seed(seed: int, run: int) -> int:
    return kernels.mix_seed(int(seed) % kernels.M31, _RUN_STREAM_BASE + run, 0)


def _report(metric: str, values, cfg: MlpConfig, runs: int, extra=None):
    values = np.asarray(values, np.float64)
    report = {
        "metric": metric,
        "mean": float(values.mean()),
        "std": float(values.std()),
        "runs": runs,
        "values": [float(v) for v in values],
        "config": asdict(cfg),
    }
    if extra:
        report.update(extra)
    return report


def run_node_classification(
    g: Graph,
    matrix: np.ndarray,
    task: NodeLabelTask,
    cfg: MlpConfig,
    runs: int = 10,
) -> dict:
    """10-run node-classification protocol; metric is test accuracy."""
    task.validate(g.num_nodes)
    features = np.asarray(matrix, np.float64)
    if features.shape[0] != g.num_nodes:
        raise DataError(f"{features.shape[0]} embedding rows for {g.num_nodes} nodes")
    train_ids = np.asarray(task.splits["train"])
    valid_ids = np.asarray(task.splits.get("valid", ()))
    test_ids = np.asarray(task.splits["test"])

    values = []
    for run in range(runs):
        run_cfg = replace(cfg, seed=run_seed(cfg.seed, run))
        score_fn = None
        if valid_ids.size:
            score_fn = lambda model: evaluate_accuracy(  # noqa: E731
                model.predict(features[valid_ids]), task.labels[valid_ids]
            )
        model = train_mlp(
            features,
            task.labels,
            run_cfg,
            train_ids,
            valid_score_fn=score_fn,
            num_classes=task.num_classes,
        )
        values.append(evaluate_accuracy(model.predict(features[test_ids]), task.labels[test_ids]))
    return _report("accuracy", values, cfg, runs)


def _link_metric(task: LinkTask, pos_scores, neg_scores, neg_per_pos_scores=None) -> float:
    kind, k = task.metric_kind()
    if kind == "hits":
        return hits_at_k(pos_scores, neg_scores, k)
    if kind == "mrr":
        if neg_per_pos_scores is not None:
            return mrr(zip(pos_scores, neg_per_pos_scores))
        return mrr((p, neg_scores) for p in pos_scores)
    scores = np.concatenate([pos_scores, neg_scores])
    labels = np.concatenate([np.ones(len(pos_scores)), np.zeros(len(neg_scores))])
    return evaluate_roc_auc(scores, labels)


def run_link_prediction(
    g: Graph,
    matrix: np.ndarray,
    task: LinkTask,
    cfg: MlpConfig,
    runs: int = 10,
    combiner: str = "hadamard",
) -> dict:
    """10-run link-prediction protocol over edge-pair features.

    Per run, a binary classifier is trained on the task's positive train
    edges plus an equal number of freshly sampled non-edges; the positive
    class probability scores valid/test pairs.
    """
    task.validate(g)
    features = np.asarray(matrix, np.float64)
    if features.shape[0] != g.num_nodes:
        raise DataError(f"{features.shape[0]} embedding rows for {g.num_nodes} nodes")
    train_pos = np.asarray(task.train_edges, np.int64).reshape(-1, 2)
    if len(train_pos) == 0:
        raise DataError("no training edges")
    forbid = [tuple(e) for e in np.asarray(task.test_pos).reshape(-1, 2)]
    if task.valid_pos is not None:
        forbid += [tuple(e) for e in np.asarray(task.valid_pos).reshape(-1, 2)]

    def score(model, edges):
        return model.predict_proba(edge_features(features, edges, combiner))[:, 1]

    values = []
    for run in range(runs):
        seed = run_seed(cfg.seed, run)
        rng = np.random.default_rng(seed)
        train_neg = sample_non_edges(g, len(train_pos), rng, forbid=forbid)
        x = np.vstack(
            [
                edge_features(features, train_pos, combiner),
                edge_features(features, train_neg, combiner),
            ]
        )
        y = np.concatenate([np.ones(len(train_pos), np.int64), np.zeros(len(train_neg), np.int64)])
        run_cfg = replace(cfg, seed=seed)

        score_fn = None
        if task.valid_pos is not None and task.valid_neg is not None:
            score_fn = lambda model: _link_metric(  # noqa: E731
                task, score(model, task.valid_pos), score(model, task.valid_neg)
            )
        model = train_mlp(x, y, run_cfg, np.arange(len(y)), valid_score_fn=score_fn, num_classes=2)

        neg_per_pos = None
        if task.test_neg_per_pos is not None:
            neg_per_pos = [score(model, cands) for cands in task.test_neg_per_pos]
        values.append(
            _link_metric(task, score(model, task.test_pos), score(model, task.test_neg), neg_per_pos)
        )
    return _report(task.metric, values, cfg, runs, extra={"combiner": combiner})
