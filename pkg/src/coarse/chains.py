"""r-chains: the strict-neighbourhood graph, chain components, hop metric, r-convexity."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path
from scipy.spatial import cKDTree

from .metric import INF, CoarseInputError, FiniteMetricSpace, as_ids

_P = {"l1": 1, "l2": 2, "linf": np.inf}


@dataclass(frozen=True)
class ChainGraph:
    """Points joined when their distance is strictly below ``scale_r``.

    Adjacency is stored CSR-style: the neighbours of ``x`` are
    ``indices[indptr[x]:indptr[x + 1]]`` in increasing id order.
    """

    scale_r: float
    n: int
    indptr: np.ndarray
    indices: np.ndarray

    def neighbors(self, x: int) -> np.ndarray:
        return self.indices[self.indptr[x] : self.indptr[x + 1]]

    def adjacency(self) -> list[set[int]]:
        return [set(self.neighbors(x).tolist()) for x in range(self.n)]

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    def sparse(self) -> csr_matrix:
        data = np.ones(len(self.indices), dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def restricted(self, keep: np.ndarray) -> csr_matrix:
        """Sparse adjacency with every edge touching a dropped point removed."""
        mat = self.sparse().tocoo()
        ok = keep[mat.row] & keep[mat.col]
        return csr_matrix((mat.data[ok], (mat.row[ok], mat.col[ok])), shape=(self.n, self.n))


def _ultra_pairs(coords: np.ndarray, r: float) -> tuple[np.ndarray, np.ndarray]:
    # d(x, y) < r iff x and y agree at every 1-based index >= r: cliques on equal suffixes
    k = max(int(np.ceil(r)) - 1, 0)
    _, group = np.unique(coords[:, k:], axis=0, return_inverse=True)
    group = group.ravel()
    order = np.argsort(group, kind="stable")
    bounds = np.flatnonzero(np.diff(group[order])) + 1
    rows, cols = [], []
    for members in np.split(order, bounds):
        if len(members) > 1:
            a, b = np.triu_indices(len(members), 1)
            rows.append(members[a])
            cols.append(members[b])
    if not rows:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return np.concatenate(rows).astype(np.int64), np.concatenate(cols).astype(np.int64)


def _close_pairs(space: FiniteMetricSpace, r: float) -> tuple[np.ndarray, np.ndarray]:
    n = space.n
    if space.metric == "ultra" and n:
        return _ultra_pairs(space.coords, r)
    if space.coords is not None and space.metric in _P and n > 1500:
        tree = cKDTree(space.coords)
        cand = tree.query_pairs(r * (1 + 1e-9) + 1e-12, p=_P[space.metric], output_type="ndarray")
        if len(cand) == 0:
            return np.empty(0, np.int64), np.empty(0, np.int64)
        i, j = cand[:, 0].astype(np.int64), cand[:, 1].astype(np.int64)
        delta = space.coords[i] - space.coords[j]
        if space.metric == "l2":
            d = np.sqrt((delta * delta).sum(axis=1))
        elif space.metric == "l1":
            d = np.abs(delta).sum(axis=1)
        else:
            d = np.abs(delta).max(axis=1)
        keep = d < r
        return i[keep], j[keep]
    rows, cols = [], []
    ids = np.arange(n)
    start = 0
    for chunk in space.row_chunks(ids, n):
        block = space.dist_block(chunk, ids) < r
        block[np.arange(len(chunk)), chunk] = False
        ci, cj = np.nonzero(block)
        rows.append(ci + start)
        cols.append(cj)
        start += len(chunk)
    if not rows:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    i, j = np.concatenate(rows), np.concatenate(cols)
    keep = i < j
    return i[keep], j[keep]


def build_chain_graph(space: FiniteMetricSpace, r: float) -> ChainGraph:
    """Graph with an edge x~y exactly when x != y and d(x, y) < r."""
    if not r > 0:
        raise CoarseInputError(f"chain scale must be positive, got {r}")

    def build():
        i, j = _close_pairs(space, r)
        src = np.concatenate([i, j])
        dst = np.concatenate([j, i])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(space.n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        indptr = np.cumsum(indptr)
        return ChainGraph(float(r), space.n, indptr, dst.astype(np.int64))

    return space.cached(("chain", float(r)), build)


def hop_distances(graph: ChainGraph, sources, keep: np.ndarray | None = None) -> np.ndarray:
    """Multi-source BFS hop counts (-1 = unreachable), optionally inside ``keep``."""
    dist = np.full(graph.n, -1, dtype=np.int64)
    queue = deque()
    for s in sorted(int(x) for x in sources):
        if (keep is None or keep[s]) and dist[s] < 0:
            dist[s] = 0
            queue.append(s)
    while queue:
        x = queue.popleft()
        for y in graph.neighbors(x):
            if dist[y] < 0 and (keep is None or keep[y]):
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def shortest_chain(graph: ChainGraph, sources, targets, keep: np.ndarray | None = None) -> list[int] | None:
    """A minimum-hop chain from ``sources`` to ``targets`` within ``keep``, lowest ids first."""
    target = np.zeros(graph.n, dtype=bool)
    target[list(targets)] = True
    parent = np.full(graph.n, -2, dtype=np.int64)
    queue = deque()
    for s in sorted(int(x) for x in sources):
        if (keep is None or keep[s]) and parent[s] == -2:
            parent[s] = -1
            queue.append(s)
    while queue:
        x = int(queue.popleft())
        if target[x]:
            path = [x]
            while parent[path[-1]] >= 0:
                path.append(int(parent[path[-1]]))
            return path[::-1]
        for y in graph.neighbors(x):
            if parent[y] == -2 and (keep is None or keep[y]):
                parent[y] = x
                queue.append(y)
    return None


def component_labels(space: FiniteMetricSpace, r: float) -> np.ndarray:
    graph = build_chain_graph(space, r)

    def build():
        _, labels = connected_components(graph.sparse(), directed=False)
        return labels

    return space.cached(("labels", float(r)), build)


def chain_component(space: FiniteMetricSpace, x: int, r: float) -> frozenset[int]:
    """[x]_r: every point joined to x by an r-chain (x itself included)."""
    x = space.check_point(x)
    labels = component_labels(space, r)
    return frozenset(np.nonzero(labels == labels[x])[0].tolist())


def chain_metric(space: FiniteMetricSpace, x: int, y: int, r: float) -> int | None:
    """d_r(x, y) as a hop count, or None when y is outside [x]_r."""
    x, y = space.check_point(x), space.check_point(y)
    if x == y:
        return 0
    hops = hop_distances(build_chain_graph(space, r), [x])
    return int(hops[y]) if hops[y] >= 0 else None


def is_r_connected(space: FiniteMetricSpace, r: float) -> bool:
    if space.n <= 1:
        return True
    labels = component_labels(space, r)
    return bool(np.all(labels == labels[0]))


@dataclass
class ConvexityReport:
    scale_r: float
    connected: bool
    violation_count: int
    violations: list[tuple[int, int, float, int | None]] = field(default_factory=list)

    @property
    def convex(self) -> bool:
        return self.connected and self.violation_count == 0

    def to_dict(self) -> dict:
        return {
            "scale_r": self.scale_r,
            "connected": self.connected,
            "convex": self.convex,
            "violation_count": self.violation_count,
            "violations": [
                {"x": x, "y": y, "d": d, "d_r": h if h is not None else "unreachable"}
                for x, y, d, h in self.violations
            ],
        }


def check_r_convexity(space: FiniteMetricSpace, r: float, max_listed: int = 1000) -> ConvexityReport:
    """Find pairs with d(x, y) >= r whose hop distance is missing or exceeds d(x, y).

    Every violating pair x < y is counted; the first ``max_listed`` in
    lexicographic order are kept with their numbers.
    """
    graph = build_chain_graph(space, r)
    adj = graph.sparse()
    ids = np.arange(space.n)
    count = 0
    listed: list[tuple[int, int, float, int | None]] = []
    for chunk in space.row_chunks(ids, max(space.n, 1) * 4):
        hops = shortest_path(adj, unweighted=True, directed=False, indices=chunk)
        d = space.dist_block(chunk, ids)
        upper = ids[None, :] > chunk[:, None]
        bad = upper & (d >= r) & (hops > d)
        count += int(bad.sum())
        if len(listed) < max_listed:
            for a, b in np.argwhere(bad):
                if len(listed) >= max_listed:
                    break
                h = hops[a, b]
                listed.append((int(chunk[a]), int(b), float(d[a, b]), None if np.isinf(h) else int(h)))
    return ConvexityReport(float(r), is_r_connected(space, r), count, listed)


def components_within(graph: ChainGraph, keep: np.ndarray) -> np.ndarray:
    """Component labels of the graph restricted to ``keep`` (-1 for dropped points)."""
    _, labels = connected_components(graph.restricted(keep), directed=False)
    labels = labels.astype(np.int64)
    labels[~keep] = -1
    return labels


def reach(space: FiniteMetricSpace, seeds, r: float, keep: np.ndarray | None = None) -> np.ndarray:
    """Boolean mask of points joined to some seed by an r-chain staying in ``keep``."""
    graph = build_chain_graph(space, r)
    seeds = as_ids(space, seeds)
    if keep is None:
        labels = component_labels(space, r)
    else:
        seeds = seeds[keep[seeds]]
        labels = components_within(graph, keep)
    if len(seeds) == 0:
        return np.zeros(space.n, dtype=bool)
    hit = np.unique(labels[seeds])
    mask = np.isin(labels, hit)
    if keep is not None:
        mask &= keep
    return mask


__all__ = [
    "ChainGraph",
    "ConvexityReport",
    "INF",
    "build_chain_graph",
    "chain_component",
    "chain_metric",
    "check_r_convexity",
    "hop_distances",
    "is_r_connected",
    "reach",
    "shortest_chain",
]
