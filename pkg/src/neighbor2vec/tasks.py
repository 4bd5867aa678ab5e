"""Supervised task containers, split files and negative-edge sampling."""

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, FormatError
from .graph import Graph


@dataclass
class NodeLabelTask:
    labels: np.ndarray  # per-node class id, -1 for unlabeled
    splits: dict  # name -> node-id array; "train" required
    num_classes: int

    def validate(self, num_nodes: int) -> None:
        if len(self.labels) != num_nodes:
            raise DataError(f"{len(self.labels)} labels for {num_nodes} nodes")
        seen = np.zeros(num_nodes, bool)
        for name, ids in self.splits.items():
            ids = np.asarray(ids)
            if ids.size and (ids.min() < 0 or ids.max() >= num_nodes):
                raise DataError(f"split {name!r} references nodes outside [0, {num_nodes})")
            if np.any(self.labels[ids] < 0):
                raise DataError(f"split {name!r} contains unlabeled nodes")
            if np.any(self.labels[ids] >= self.num_classes):
                raise DataError(f"split {name!r} contains class ids >= {self.num_classes}")
            if seen[ids].any():
                raise DataError(f"split {name!r} overlaps another split")
            seen[ids] = True


@dataclass
class LinkTask:
    """Edge sets for link prediction.

    ``metric`` is one of "roc_auc", "mrr" or "hits@K" (e.g. "hits@50").
    For MRR, ``test_neg_per_pos`` may give each positive its own candidate
    array of shape (P, C, 2); otherwise positives rank against the shared
    ``test_neg`` pool.
    """

    train_edges: np.ndarray
    test_pos: np.ndarray
    test_neg: np.ndarray
    valid_pos: np.ndarray | None = None
    valid_neg: np.ndarray | None = None
    test_neg_per_pos: np.ndarray | None = field(default=None, repr=False)
    metric: str = "roc_auc"

    def metric_kind(self):
        """Returns ("hits", K) or ("mrr", None) or ("roc_auc", None)."""
        if self.metric.startswith("hits@"):
            k = int(self.metric.split("@", 1)[1])
            if k < 1:
                raise DataError(f"bad metric {self.metric!r}")
            return "hits", k
        if self.metric in ("mrr", "roc_auc"):
            return self.metric, None
        raise DataError(f"unknown link metric {self.metric!r}")

    def validate(self, g: Graph) -> None:
        self.metric_kind()
        train = {_pair_key(u, v, g.directed) for u, v in np.asarray(self.train_edges)}
        for u, v in np.asarray(self.test_pos):
            if _pair_key(u, v, g.directed) in train:
                raise DataError(f"test positive ({u}, {v}) appears in train_edges")
        for name, arr in (("test_neg", self.test_neg), ("valid_neg", self.valid_neg)):
            if arr is None:
                continue
            for u, v in np.asarray(arr):
                if g.has_edge(int(u), int(v)):
                    raise DataError(f"{name} pair ({u}, {v}) is an edge of the graph")


def _pair_key(u, v, directed: bool):
    u, v = int(u), int(v)
    return (u, v) if directed else (min(u, v), max(u, v))


def load_labels(path, num_nodes: int, id_map: dict | None = None) -> np.ndarray:
    """Read "node_id<TAB>class_id" lines into a per-node label array."""
    labels = np.full(num_nodes, -1, np.int64)
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t") if "\t" in line else line.split()
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 'node_id<TAB>class_id'")
            node = id_map[parts[0]] if id_map else int(parts[0])
            if not 0 <= node < num_nodes:
                raise FormatError(f"{path}:{lineno}: node {node} out of range")
            labels[node] = int(parts[1])
    return labels


def load_node_split(path) -> np.ndarray:
    """One node id per line."""
    ids = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                ids.append(int(line))
            except ValueError:
                raise FormatError(f"{path}:{lineno}: expected a node id, got {line!r}") from None
    return np.array(ids, np.int64)


def load_edge_split(path) -> np.ndarray:
    """One "u v" pair per line."""
    edges = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 'u v'")
            edges.append((int(parts[0]), int(parts[1])))
    return np.array(edges, np.int64).reshape(-1, 2)


def stratified_split(labels: np.ndarray, train_frac: float, seed: int, ids=None):
    """Split labeled ids into (train, test) preserving class proportions."""
    labels = np.asarray(labels)
    ids = np.nonzero(labels >= 0)[0] if ids is None else np.asarray(ids)
    rng = np.random.default_rng(seed)
    train, test = [], []
    for cls in np.unique(labels[ids]):
        members = ids[labels[ids] == cls]
        members = rng.permutation(members)
        cut = int(round(train_frac * len(members)))
        train.extend(members[:cut])
        test.extend(members[cut:])
    return np.array(sorted(train), np.int64), np.array(sorted(test), np.int64)


def sample_non_edges(g: Graph, count: int, rng: np.random.Generator, forbid=None) -> np.ndarray:
    """Uniformly sample (count, 2) node pairs that are not edges of g.

    ``forbid`` is an optional iterable of additional (u, v) pairs to avoid
    (e.g. held-out positives absent from g).  Gives up after 100 * count
    attempts on graphs too dense to sample.
    """
    if g.num_nodes < 2:
        raise DataError("graph too small to sample non-edges")
    forbidden = {_pair_key(u, v, g.directed) for u, v in (forbid if forbid is not None else ())}
    out = np.empty((count, 2), np.int64)
    got = 0
    attempts = 0
    limit = 100 * max(1, count)
    while got < count:
        attempts += 1
        if attempts > limit:
            raise DataError(f"could not sample {count} non-edges in {limit} attempts")
        u = int(rng.integers(g.num_nodes))
        v = int(rng.integers(g.num_nodes))
        if u == v or g.has_edge(u, v) or _pair_key(u, v, g.directed) in forbidden:
            continue
        out[got, 0], out[got, 1] = u, v
        got += 1
    return out
