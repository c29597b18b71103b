"""Continuous k-nearest-neighbor graph construction.

The CkNN rule connects u and v when their normalized distance beats the
geometric mean of their local scales:

    tau(u, v) < delta * sqrt(tau(u, u_k) * tau(v, v_k))

with u_k the k-th nearest neighbor of u and the inequality strict. The rule
adapts to local density: pairs in sparse regions connect at distances that
would not qualify in dense regions. Isolated nodes are legal output.

Edge weights are the normalized similarities s = 1 - tau of the admitted
pairs. Graphs round-trip through a TSV edge list (token pairs plus weight at
17 significant digits).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import GraphConstructionError


@dataclass(frozen=True)
class SemanticGraph:
    """Undirected weighted graph over the vocabulary.

    adjacency is CSR with sorted indices, i.e. adjacency lists ordered by
    neighbor index. k and delta record the construction parameters when the
    graph came from build_cknn (None for imported or hand-built graphs).
    """

    n_nodes: int
    adjacency: sp.csr_matrix
    node_tokens: tuple[str, ...]
    k: int | None = None
    delta: float | None = None
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {w: i for i, w in enumerate(self.node_tokens)})

    @property
    def n_edges(self):
        return self.adjacency.nnz // 2

    def neighbors(self, i):
        """Neighbor indices of node i, ascending."""
        a = self.adjacency
        return a.indices[a.indptr[i]:a.indptr[i + 1]]

    def weight(self, i, j):
        return self.adjacency[i, j]

    def strengths(self):
        return np.asarray(self.adjacency.sum(axis=1)).ravel()

    def edge_set(self):
        """Set of (i, j) with i < j."""
        coo = self.adjacency.tocoo()
        return {(int(i), int(j)) for i, j in zip(coo.row, coo.col) if i < j}

    def isolated_nodes(self):
        """Nodes with no incident edge, ascending."""
        deg = np.diff(self.adjacency.indptr)
        return [int(i) for i in np.flatnonzero(deg == 0)]

    def index_of(self, token):
        try:
            return self._index[token]
        except KeyError:
            raise KeyError(f"token {token!r} is not a graph node") from None

    @classmethod
    def from_edges(cls, node_tokens, edges, k=None, delta=None):
        """Build a graph from (i, j, weight) triples.

        Convenience for tests and the edge-list importer. Self-loops and
        duplicate pairs are rejected; weights must lie in [0, 1] (a weight of
        exactly 0 is the boundary case of a maximally distant admitted pair).
        """
        node_tokens = tuple(node_tokens)
        n = len(node_tokens)
        seen = set()
        rows, cols, vals = [], [], []
        for i, j, w in edges:
            if i == j:
                raise GraphConstructionError(f"self-loop at node {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise GraphConstructionError(f"edge ({i},{j}) outside 0..{n - 1}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GraphConstructionError(f"duplicate edge {key}")
            seen.add(key)
            if not (0.0 <= w <= 1.0):
                raise GraphConstructionError(f"edge {key} weight {w} outside [0, 1]")
            rows += [i, j]
            cols += [j, i]
            vals += [w, w]
        adjacency = sp.csr_matrix(
            (vals, (rows, cols)), shape=(n, n), dtype=np.float64
        )
        adjacency.sort_indices()
        return cls(n_nodes=n, adjacency=adjacency, node_tokens=node_tokens,
                   k=k, delta=delta)


def kth_neighbor_distance(matrices, i, k):
    """tau distance from node i to its k-th nearest neighbor.

    The k-th smallest off-diagonal entry of row i (ties share a value, so
    index order among ties cannot change the result). Duplicate vectors give
    0, which is surfaced as a warning because it poisons the CkNN rule.
    """
    n = matrices.n
    if not (1 <= k <= n - 1):
        raise GraphConstructionError(f"k must be in 1..{n - 1}, got {k}")
    row = np.delete(matrices.tau[i], i)
    row.sort()
    d = float(row[k - 1])
    if d == 0.0:
        warnings.warn(
            f"node {i} has a zero k-th neighbor distance (duplicate vectors)",
            stacklevel=2,
        )
    return d


def build_cknn(matrices, k, delta=1.0, node_tokens=None):
    """Construct the CkNN graph for a PairwiseMatrices.

    Raises GraphConstructionError when any k-th neighbor distance is zero,
    unless the space was loaded with allow_duplicates; in that case the
    strict rule runs as written (those nodes end up isolated) and a warning
    lists them.
    """
    n = matrices.n
    if not (1 <= k <= n - 1):
        raise GraphConstructionError(f"k must be in 1..{n - 1}, got {k}")
    if delta <= 0:
        raise GraphConstructionError(f"delta must be positive, got {delta}")
    if node_tokens is None:
        node_tokens = matrices.tokens or tuple(str(i) for i in range(n))

    tau = matrices.tau
    masked = tau.copy()
    np.fill_diagonal(masked, np.inf)
    masked.sort(axis=1)
    dk = masked[:, k - 1]

    zero_nodes = np.flatnonzero(dk == 0.0)
    if zero_nodes.size:
        names = ", ".join(node_tokens[i] for i in zero_nodes[:10])
        if not matrices.allows_duplicates:
            raise GraphConstructionError(
                f"{zero_nodes.size} node(s) with zero k-th neighbor distance "
                f"(duplicate vectors): {names}"
            )
        warnings.warn(
            f"{zero_nodes.size} node(s) with zero k-th neighbor distance are "
            f"isolated under the strict rule: {names}",
            stacklevel=2,
        )

    threshold = delta * np.sqrt(np.outer(dk, dk))
    mask = tau < threshold
    np.fill_diagonal(mask, False)
    rows, cols = np.nonzero(mask)
    vals = matrices.s[rows, cols]
    adjacency = sp.csr_matrix((vals, (rows, cols)), shape=(n, n), dtype=np.float64)
    adjacency.sort_indices()
    return SemanticGraph(
        n_nodes=n,
        adjacency=adjacency,
        node_tokens=tuple(node_tokens),
        k=k,
        delta=float(delta),
    )


def connected_component_of(graph, i):
    """Nodes reachable from i, ascending. Breadth-first, neighbors by index."""
    if not (0 <= i < graph.n_nodes):
        raise GraphConstructionError(f"node {i} outside 0..{graph.n_nodes - 1}")
    seen = {i}
    frontier = [i]
    while frontier:
        nxt = []
        for u in frontier:
            for v in graph.neighbors(u):
                v = int(v)
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return sorted(seen)


def connected_components(graph):
    """All components as sorted index lists, ordered by smallest member."""
    unseen = set(range(graph.n_nodes))
    comps = []
    while unseen:
        start = min(unseen)
        comp = connected_component_of(graph, start)
        comps.append(comp)
        unseen.difference_update(comp)
    return comps


def _format_param(x):
    """Shortest decimal that round-trips, preferring %g when it is exact."""
    s = f"{x:g}"
    return s if float(s) == x else f"{x:.17g}"


def write_edgelist(graph, path):
    """Write the graph as a TSV edge list.

    Header comment records N, k, delta; isolated nodes get their own comment
    lines so the import can reconstruct the full node set. Edges are emitted
    as "token_i<TAB>token_j<TAB>weight" with i < j in index order and the
    weight at 17 significant digits.
    """
    with open(path, "w", encoding="utf-8") as fh:
        k = "none" if graph.k is None else str(graph.k)
        delta = "none" if graph.delta is None else _format_param(graph.delta)
        fh.write(f"# N={graph.n_nodes} k={k} delta={delta}\n")
        for i in graph.isolated_nodes():
            fh.write(f"# isolated: {graph.node_tokens[i]}\n")
        coo = graph.adjacency.tocoo()
        order = sorted(
            (int(i), int(j), v) for i, j, v in zip(coo.row, coo.col, coo.data) if i < j
        )
        for i, j, v in order:
            fh.write(f"{graph.node_tokens[i]}\t{graph.node_tokens[j]}\t{v:.17g}\n")


def read_edgelist(path):
    """Read a TSV edge list written by write_edgelist.

    Node indices follow file appearance order: isolated-node comments first,
    then edge endpoints. Files without the header comments import as graphs
    over the edge-incident nodes only.
    """
    tokens = []
    index = {}
    edges = []
    k = None
    delta = None

    def intern(tok):
        if tok not in index:
            index[tok] = len(tokens)
            tokens.append(tok)
        return index[tok]

    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise GraphConstructionError(f"cannot read edge list {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("isolated:"):
                    intern(body[len("isolated:"):].strip())
                elif body.startswith("N="):
                    for part in body.split():
                        if part.startswith("k=") and part[2:] != "none":
                            k = int(part[2:])
                        elif part.startswith("delta=") and part[6:] != "none":
                            delta = float(part[6:])
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise GraphConstructionError(
                    f"line {lineno}: expected 'token_i<TAB>token_j<TAB>weight'"
                )
            a, b = intern(parts[0]), intern(parts[1])
            try:
                w = float(parts[2])
            except ValueError as exc:
                raise GraphConstructionError(f"line {lineno}: bad weight") from exc
            edges.append((a, b, w))

    if not tokens:
        raise GraphConstructionError(f"edge list {path} is empty")
    return SemanticGraph.from_edges(tokens, edges, k=k, delta=delta)
