"""Immutable CSR graph and edge-list ingestion.

Graphs are stored in compressed-sparse-row form: ``out_offsets`` (length
n+1) and ``out_targets`` index into each node's adjacency slice, with an
optional aligned ``out_weights`` array.  Directed graphs additionally carry
the exact transpose in the ``in_*`` arrays.  Undirected edges are stored in
both endpoints' slices.  Adjacency slices are sorted by target id (a side
effect of deduplication), which makes edge membership an O(log degree)
binary search.

Node ids are dense integers ``0..n-1`` where ``n = 1 + max id seen``.
Self-loops are dropped at ingestion and duplicate pairs merge (weights
summed).  All structures are read-only after construction and safe to share
across threads.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError


@dataclass
class IngestOptions:
    directed: bool = False
    weighted: bool = False
    comment_prefix: str = "#"
    dedupe: bool = True


@dataclass
class Graph:
    num_nodes: int
    directed: bool
    weighted: bool
    out_offsets: np.ndarray
    out_targets: np.ndarray
    out_weights: np.ndarray | None = None
    in_offsets: np.ndarray | None = field(default=None, repr=False)
    in_targets: np.ndarray | None = field(default=None, repr=False)
    in_weights: np.ndarray | None = field(default=None, repr=False)

    @property
    def num_edges(self) -> int:
        """Number of distinct edges (undirected pairs counted once)."""
        slots = len(self.out_targets)
        return slots if self.directed else slots // 2

    def neighbors(self, v: int, direction: str = "out"):
        """Adjacency slice of v as ``(ids, weights)``; weights are 1.0 when
        the graph is unweighted."""
        offsets, targets, weights = self._arrays(direction)
        self._check_node(v)
        lo, hi = offsets[v], offsets[v + 1]
        ids = targets[lo:hi]
        if weights is None:
            return ids, np.ones(hi - lo)
        return ids, weights[lo:hi]

    def degree(self, v: int, direction: str = "out") -> int:
        offsets, _, _ = self._arrays(direction)
        self._check_node(v)
        return int(offsets[v + 1] - offsets[v])

    def degrees(self, direction: str = "out") -> np.ndarray:
        offsets, _, _ = self._arrays(direction)
        return np.diff(offsets)

    def average_degree(self) -> float:
        if self.num_nodes == 0:
            return 0.0
        return len(self.out_targets) / self.num_nodes

    def has_edge(self, u: int, v: int) -> bool:
        lo, hi = self.out_offsets[u], self.out_offsets[u + 1]
        i = np.searchsorted(self.out_targets[lo:hi], v)
        return i < hi - lo and self.out_targets[lo + i] == v

    def adjacency(self, direction: str = "out"):
        """(offsets, targets, weights-or-None) for kernel calls."""
        return self._arrays(direction)

    def _arrays(self, direction):
        if direction == "out":
            return self.out_offsets, self.out_targets, self.out_weights
        if direction != "in":
            raise ValueError(f"direction must be 'out' or 'in', got {direction!r}")
        if not self.directed:
            return self.out_offsets, self.out_targets, self.out_weights
        return self.in_offsets, self.in_targets, self.in_weights

    def _check_node(self, v):
        if not 0 <= v < self.num_nodes:
            raise IndexError(f"node {v} out of range [0, {self.num_nodes})")

    def edge_array(self) -> np.ndarray:
        """(E, 2) array of edges, one row per distinct edge.

        For undirected graphs only the u <= v representative is emitted.
        """
        src = np.repeat(np.arange(self.num_nodes), np.diff(self.out_offsets))
        dst = self.out_targets
        if self.directed:
            return np.column_stack([src, dst]).astype(np.int64)
        keep = src < dst
        return np.column_stack([src[keep], dst[keep]]).astype(np.int64)


def _build_csr(src, dst, w, num_nodes):
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    if w is not None:
        w = w[order]
    counts = np.bincount(src, minlength=num_nodes)
    offsets = np.zeros(num_nodes + 1, np.int64)
    np.cumsum(counts, out=offsets[1:])
    return offsets, dst.astype(np.int32), w


def from_edges(
    edges: np.ndarray,
    *,
    directed: bool = False,
    weights: np.ndarray | None = None,
    num_nodes: int | None = None,
    dedupe: bool = True,
) -> Graph:
    """Build a Graph from an (E, 2) integer edge array.

    Self-loops are removed; with ``dedupe`` duplicate pairs merge (and
    weights sum), otherwise duplicates raise.  For undirected graphs (u, v)
    and (v, u) denote the same edge.
    """
    edges = np.asarray(edges, np.int64).reshape(-1, 2)
    weighted = weights is not None
    w = np.asarray(weights, np.float64) if weighted else None
    if edges.size and edges.min() < 0:
        raise FormatError("negative node id")

    # node count comes from the raw input: a self-loop still names a node
    if num_nodes is None:
        num_nodes = int(edges.max()) + 1 if edges.size else 0
    elif edges.size and int(edges.max()) >= num_nodes:
        raise FormatError("edge endpoint exceeds declared node count")

    keep = edges[:, 0] != edges[:, 1]
    edges = edges[keep]
    if w is not None:
        w = w[keep]

    if not directed and edges.size:
        edges = np.sort(edges, axis=1)

    if edges.size:
        uniq, inverse = np.unique(edges, axis=0, return_inverse=True)
        if len(uniq) != len(edges) and not dedupe:
            raise FormatError("duplicate edges present and dedupe is off")
        if w is not None:
            merged = np.zeros(len(uniq))
            np.add.at(merged, inverse, w)
            w = merged
        edges = uniq

    if not directed and edges.size:
        edges = np.vstack([edges, edges[:, ::-1]])
        if w is not None:
            w = np.concatenate([w, w])

    src, dst = edges[:, 0], edges[:, 1]
    out_offsets, out_targets, out_weights = _build_csr(src, dst, w, num_nodes)
    g = Graph(
        num_nodes=num_nodes,
        directed=directed,
        weighted=weighted,
        out_offsets=out_offsets,
        out_targets=out_targets,
        out_weights=out_weights,
    )
    if directed:
        g.in_offsets, g.in_targets, g.in_weights = _build_csr(dst, src, w, num_nodes)
    return g


def load_edge_list(path, opts: IngestOptions | None = None) -> Graph:
    """Parse a whitespace-separated edge list file into a Graph.

    Lines are ``src dst`` or ``src dst weight``; ``#``-prefixed lines (and
    blank lines) are skipped.  Malformed lines report their line number.
    """
    opts = opts or IngestOptions()
    src, dst, wts = [], [], []
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as e:
        raise FormatError(f"cannot read edge list {path}: {e}") from e
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith(opts.comment_prefix):
                continue
            parts = line.split()
            if len(parts) < 2:
                raise FormatError(f"{path}:{lineno}: expected 'src dst [weight]', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise FormatError(f"{path}:{lineno}: non-integer node id in {line!r}") from None
            if u < 0 or v < 0:
                raise FormatError(f"{path}:{lineno}: negative node id")
            if opts.weighted:
                if len(parts) < 3:
                    raise FormatError(f"{path}:{lineno}: weighted graph but no weight column")
                try:
                    wt = float(parts[2])
                except ValueError:
                    raise FormatError(f"{path}:{lineno}: non-numeric weight {parts[2]!r}") from None
                if not np.isfinite(wt) or wt < 0:
                    raise FormatError(f"{path}:{lineno}: weight must be finite and non-negative")
                wts.append(wt)
            src.append(u)
            dst.append(v)
    edges = np.column_stack([src, dst]) if src else np.empty((0, 2), np.int64)
    weights = np.array(wts) if opts.weighted else None
    return from_edges(edges, directed=opts.directed, weights=weights, dedupe=opts.dedupe)


def save_edge_list(g: Graph, path) -> None:
    """Write the graph back as an edge list (round-trips with load)."""
    edges = g.edge_array()
    with open(path, "w", encoding="utf-8") as fh:
        if g.weighted:
            weights = _edge_weights_for(g, edges)
            for (u, v), w in zip(edges, weights):
                fh.write(f"{u} {v} {float(w)!r}\n")
        else:
            for u, v in edges:
                fh.write(f"{u} {v}\n")


def _edge_weights_for(g, edges):
    out = np.empty(len(edges))
    for i, (u, v) in enumerate(edges):
        lo, hi = g.out_offsets[u], g.out_offsets[u + 1]
        j = lo + np.searchsorted(g.out_targets[lo:hi], v)
        out[i] = g.out_weights[j]
    return out


def load_node_map(path) -> dict[str, int]:
    """Read an optional "string_id<TAB>int_id" mapping file."""
    mapping = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 'string_id<TAB>int_id'")
            try:
                mapping[parts[0]] = int(parts[1])
            except ValueError:
                raise FormatError(f"{path}:{lineno}: non-integer id {parts[1]!r}") from None
    return mapping
