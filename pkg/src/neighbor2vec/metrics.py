"""Evaluation metrics and edge-pair feature combiners."""

import numpy as np

from .errors import DataError

COMBINERS = ("hadamard", "average", "abs-diff", "squared-diff")


def evaluate_accuracy(pred_classes, true_classes) -> float:
    pred = np.asarray(pred_classes)
    true = np.asarray(true_classes)
    if pred.shape != true.shape or pred.size == 0:
        raise DataError("prediction/label length mismatch or empty input")
    return float(np.mean(pred == true))


def evaluate_roc_auc(scores, binary_labels) -> float:
    """Mann-Whitney AUC: P(score_pos > score_neg) + 0.5 * P(tie).

    Computed from tie-averaged ranks, so it is exact for any tie pattern.
    """
    scores = np.asarray(scores, np.float64)
    labels = np.asarray(binary_labels).astype(bool)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DataError("ROC-AUC needs both classes present")
    _, inverse, counts = np.unique(scores, return_inverse=True, return_counts=True)
    before = np.cumsum(counts) - counts
    avg_rank = before + (counts + 1) / 2.0
    ranks = avg_rank[inverse]
    return float((ranks[labels].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def hits_at_k(pos_scores, neg_scores, k: int) -> float:
    """Fraction of positives scored strictly above the k-th largest negative."""
    pos = np.asarray(pos_scores, np.float64)
    neg = np.asarray(neg_scores, np.float64)
    if k < 1 or len(neg) < k:
        raise DataError(f"hits@{k} needs at least {k} negative scores, got {len(neg)}")
    if len(pos) == 0:
        raise DataError("hits@K needs at least one positive score")
    threshold = np.sort(neg)[-k]
    return float(np.mean(pos > threshold))


def mrr(per_positive) -> float:
    """Mean reciprocal rank with optimistic ties.

    ``per_positive`` is a sequence of (positive score, negative candidate
    scores); the rank of a positive is 1 plus the number of candidates
    scored strictly higher.
    """
    items = list(per_positive)
    if not items:
        raise DataError("MRR needs at least one positive")
    total = 0.0
    for pos, negs in items:
        negs = np.asarray(negs, np.float64)
        if negs.size == 0:
            raise DataError("empty negative candidate list")
        rank = 1 + int((negs > pos).sum())
        total += 1.0 / rank
    return total / len(items)


def edge_feature(emb_u, emb_v, combiner: str = "hadamard") -> np.ndarray:
    """Elementwise combination of two node vectors into a pair feature."""
    u = np.asarray(emb_u, np.float64)
    v = np.asarray(emb_v, np.float64)
    if u.shape != v.shape:
        raise DataError(f"vector shape mismatch: {u.shape} vs {v.shape}")
    if combiner == "hadamard":
        return u * v
    if combiner == "average":
        return (u + v) / 2.0
    if combiner == "abs-diff":
        return np.abs(u - v)
    if combiner == "squared-diff":
        return (u - v) ** 2
    raise ValueError(f"combiner must be one of {COMBINERS}")


def edge_features(matrix: np.ndarray, edges: np.ndarray, combiner: str = "hadamard") -> np.ndarray:
    """Vectorized edge_feature over an (E, 2) edge array."""
    edges = np.asarray(edges, np.int64).reshape(-1, 2)
    u = np.asarray(matrix, np.float64)[edges[:, 0]]
    v = np.asarray(matrix, np.float64)[edges[:, 1]]
    if combiner == "hadamard":
        return u * v
    if combiner == "average":
        return (u + v) / 2.0
    if combiner == "abs-diff":
        return np.abs(u - v)
    if combiner == "squared-diff":
        return (u - v) ** 2
    raise ValueError(f"combiner must be one of {COMBINERS}")
