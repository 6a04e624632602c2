"""Finite metric spaces, balls, set distances and Hausdorff distance.

A space is either backed by an explicit distance matrix or by coordinates
plus a norm.  Coordinate-backed spaces never materialize the full matrix
unless asked to, so samples with tens of thousands of points stay cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

INF = math.inf

METRICS = ("matrix", "l1", "l2", "linf", "ultra")

Subset = frozenset  # of point ids

_BLOCK_ELEMS = 1 << 22


class CoarseInputError(ValueError):
    """Raised when an operation receives arguments outside its contract."""


@dataclass(frozen=True)
class Violation:
    kind: str  # diagonal | negative | asymmetric | triangle | nonfinite
    points: tuple[int, ...]
    defect: float

    def to_dict(self) -> dict:
        return {"kind": self.kind, "points": list(self.points), "defect": self.defect}


def _pairwise(P: np.ndarray, Q: np.ndarray, metric: str) -> np.ndarray:
    if metric == "ultra":
        # first-difference ultrametric: largest 1-based index where coordinates differ
        weights = np.arange(1, P.shape[1] + 1, dtype=np.float64)
        diff = P[:, None, :] != Q[None, :, :]
        return (diff * weights).max(axis=2) if P.shape[1] else np.zeros((len(P), len(Q)))
    delta = P[:, None, :] - Q[None, :, :]
    if metric == "l2":
        return np.sqrt((delta * delta).sum(axis=2))
    if metric == "l1":
        return np.abs(delta).sum(axis=2)
    return np.abs(delta).max(axis=2) if P.shape[1] else np.zeros((len(P), len(Q)))


class FiniteMetricSpace:
    """Immutable finite metric space.

    Build one with :meth:`from_matrix` or :meth:`from_points`.  Point ids are
    ``0..n-1``.  ``interior[i] = k`` means the open ``k``-ball of point ``i``
    in the ideal (untruncated) space lies entirely inside this sample.
    """

    def __init__(
        self,
        *,
        metric: str,
        matrix: np.ndarray | None = None,
        coords: np.ndarray | None = None,
        labels: Sequence[str] | None = None,
        interior: Sequence[float] | None = None,
        subsets: Mapping[str, Iterable[int]] | None = None,
        name: str = "",
        parent_ids: Sequence[int] | None = None,
    ):
        if metric not in METRICS:
            raise CoarseInputError(f"unknown metric {metric!r}")
        if metric == "matrix":
            if matrix is None:
                raise CoarseInputError("matrix metric needs a distance matrix")
            matrix = np.array(matrix, dtype=np.float64)
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
                raise CoarseInputError("distance matrix must be square")
            matrix.setflags(write=False)
            n = matrix.shape[0]
        else:
            if coords is None:
                raise CoarseInputError(f"{metric} metric needs coordinates")
            coords = np.array(coords, dtype=np.float64)
            if coords.ndim == 1:
                coords = coords.reshape(-1, 1) if coords.size else coords.reshape(0, 0)
            if not np.all(np.isfinite(coords)):
                raise CoarseInputError("coordinates must be finite")
            coords.setflags(write=False)
            n = coords.shape[0]
        self.metric = metric
        self.n = n
        self._matrix = matrix
        self.coords = coords
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != n:
            raise CoarseInputError("labels length differs from point count")
        if interior is not None:
            interior = np.array(interior, dtype=np.float64)
            if interior.shape != (n,) or np.any(interior < 0):
                raise CoarseInputError("interior marks must be n nonnegative lengths")
            interior.setflags(write=False)
        self.interior = interior
        self.name = name
        self.subsets: dict[str, frozenset[int]] = {}
        for key, members in (subsets or {}).items():
            self.subsets[key] = self.subset(members)
        self.parent_ids = np.asarray(parent_ids, dtype=np.int64) if parent_ids is not None else None
        self._cache: dict = {}

    @classmethod
    def from_matrix(cls, matrix, **kwargs) -> "FiniteMetricSpace":
        return cls(metric="matrix", matrix=matrix, **kwargs)

    @classmethod
    def from_points(cls, points, metric: str = "l2", **kwargs) -> "FiniteMetricSpace":
        if metric == "matrix":
            raise CoarseInputError("from_points needs a coordinate metric")
        return cls(metric=metric, coords=points, **kwargs)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(name={self.name!r}, n={self.n}, metric={self.metric!r})"

    # distance access

    def dist_block(self, rows, cols) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if self._matrix is not None:
            return self._matrix[np.ix_(rows, cols)]
        return _pairwise(self.coords[rows], self.coords[cols], self.metric)

    def dist_row(self, i: int) -> np.ndarray:
        if self._matrix is not None:
            return self._matrix[i]
        return _pairwise(self.coords[i : i + 1], self.coords, self.metric)[0]

    def d(self, i: int, j: int) -> float:
        return float(self.dist_block([i], [j])[0, 0])

    @property
    def dist(self) -> np.ndarray:
        """Full distance matrix (materialized and cached for coordinate spaces)."""
        if self._matrix is not None:
            return self._matrix
        if "dist" not in self._cache:
            full = self.dist_block(np.arange(self.n), np.arange(self.n))
            full.setflags(write=False)
            self._cache["dist"] = full
        return self._cache["dist"]

    def row_chunks(self, ids: np.ndarray, width: int):
        """Yield slices of ``ids`` sized so a chunk-by-width block stays small."""
        step = max(1, _BLOCK_ELEMS // max(1, width * max(1, self.dim)))
        for start in range(0, len(ids), step):
            yield ids[start : start + step]

    @property
    def dim(self) -> int:
        return 0 if self.coords is None else self.coords.shape[1]

    # subsets

    def subset(self, members: Iterable[int]) -> frozenset[int]:
        out = frozenset(int(m) for m in members)
        for m in out:
            if not 0 <= m < self.n:
                raise CoarseInputError(f"point id {m} outside 0..{self.n - 1}")
        return out

    def check_point(self, x: int) -> int:
        x = int(x)
        if not 0 <= x < self.n:
            raise CoarseInputError(f"unknown point id {x}")
        return x

    def locate(self, coord: Sequence[float]) -> int:
        """Id of the point with exactly these coordinates."""
        if self.coords is None:
            raise CoarseInputError("space has no coordinates")
        hits = np.nonzero(np.all(self.coords == np.asarray(coord, dtype=np.float64), axis=1))[0]
        if len(hits) == 0:
            raise CoarseInputError(f"no point at {tuple(coord)}")
        return int(hits[0])

    def subspace(self, members: Iterable[int], name: str | None = None) -> "FiniteMetricSpace":
        """Restriction of the metric to ``members`` (ids renumbered in increasing order)."""
        ids = as_ids(self, members)
        kwargs = dict(
            labels=[self.labels[i] for i in ids] if self.labels is not None else None,
            interior=self.interior[ids] if self.interior is not None else None,
            name=name if name is not None else f"{self.name}|sub",
            parent_ids=ids,
        )
        if self._matrix is not None:
            return FiniteMetricSpace(metric="matrix", matrix=self._matrix[np.ix_(ids, ids)], **kwargs)
        return FiniteMetricSpace(metric=self.metric, coords=self.coords[ids], **kwargs)

    def cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]


def as_ids(space: FiniteMetricSpace, members: Iterable[int]) -> np.ndarray:
    if isinstance(members, np.ndarray) and members.dtype == bool:
        return np.nonzero(members)[0]
    ids = np.array(sorted(space.subset(members)), dtype=np.int64)
    return ids


def min_distances(space: FiniteMetricSpace, sources, targets) -> np.ndarray:
    """For each source id, its distance to the target set (INF when targets empty)."""
    src = np.asarray(sources, dtype=np.int64)
    tgt = np.asarray(targets, dtype=np.int64)
    out = np.full(len(src), INF)
    if len(tgt) == 0 or len(src) == 0:
        return out
    pos = 0
    for chunk in space.row_chunks(src, len(tgt)):
        out[pos : pos + len(chunk)] = space.dist_block(chunk, tgt).min(axis=1)
        pos += len(chunk)
    return out


def distance_to_set(space: FiniteMetricSpace, A: Iterable[int]) -> np.ndarray:
    """Array of d(x, A) over every point x of the space."""
    return min_distances(space, np.arange(space.n), as_ids(space, A))


def set_distance(space: FiniteMetricSpace, A: Iterable[int], B: Iterable[int]) -> float:
    """min over a in A, b in B of d(a, b); INF if either set is empty."""
    a, b = as_ids(space, A), as_ids(space, B)
    if len(a) == 0 or len(b) == 0:
        return INF
    if len(a) > len(b):
        a, b = b, a
    return float(min_distances(space, a, b).min())


def hausdorff_distance(space: FiniteMetricSpace, A: Iterable[int], B: Iterable[int]) -> float:
    a, b = as_ids(space, A), as_ids(space, B)
    if len(a) == 0 and len(b) == 0:
        return 0.0
    if len(a) == 0 or len(b) == 0:
        return INF
    forward = min_distances(space, a, b).max()
    backward = min_distances(space, b, a).max()
    return float(max(forward, backward))


def ball(space: FiniteMetricSpace, A: Iterable[int], radius: float) -> frozenset[int]:
    """Open ball {x : d(x, A) < radius}."""
    if radius < 0:
        raise CoarseInputError(f"negative radius {radius}")
    a = as_ids(space, A)
    if len(a) == 0 or radius == 0:
        return frozenset()
    return frozenset(np.nonzero(distance_to_set(space, a) < radius)[0].tolist())


def diameter(space: FiniteMetricSpace, S: Iterable[int]) -> float:
    """Largest pairwise distance inside S (0 for sets of size <= 1)."""
    ids = as_ids(space, S)
    if len(ids) <= 1:
        return 0.0
    best = 0.0
    for chunk in space.row_chunks(ids, len(ids)):
        best = max(best, float(space.dist_block(chunk, ids).max()))
    return best


def validate_metric(space: FiniteMetricSpace, tol: float = 1e-9, limit: int = 1000) -> list[Violation]:
    """Report every metric-axiom defect larger than ``tol`` (at most ``limit`` of them).

    Coordinate-backed spaces above 400 points skip the O(n^3) triangle scan;
    a norm or the first-difference ultrametric satisfies it by construction.
    """
    out: list[Violation] = []
    n = space.n
    if space.coords is not None and n > 400:
        return out
    D = space.dist
    bad = ~np.isfinite(D)
    for i, j in zip(*np.nonzero(bad)):
        out.append(Violation("nonfinite", (int(i), int(j)), INF))
        if len(out) >= limit:
            return out
    if bad.any():
        return out
    diag = np.abs(np.diag(D))
    for i in np.nonzero(diag > tol)[0]:
        out.append(Violation("diagonal", (int(i),), float(diag[i])))
    neg = np.argwhere(D < -tol)
    for i, j in neg:
        out.append(Violation("negative", (int(i), int(j)), float(-D[i, j])))
    asym = np.abs(D - D.T)
    for i, j in np.argwhere(np.triu(asym > tol, k=1)):
        out.append(Violation("asymmetric", (int(i), int(j)), float(asym[i, j])))
    if len(out) >= limit:
        return out[:limit]
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    for j in range(n):
        defect = D - (D[:, j][:, None] + D[j, :][None, :])
        hits = np.argwhere((defect > tol) & upper)
        for i, k in hits:
            out.append(Violation("triangle", (int(i), j, int(k)), float(defect[i, k])))
            if len(out) >= limit:
                return out
    return out
