"""Asymptotic cuts and large-scale separators at finite scale.

Also holds the two partitions built inside the cut-to-separator and
zero-dimensional arguments, and a deterministic minimum vertex cut.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .chains import build_chain_graph, hop_distances, reach, shortest_chain
from .metric import INF, CoarseInputError, FiniteMetricSpace, as_ids, ball, distance_to_set
from .resemblance import ScaleParams, window_gap


def _ext(v: float):
    return "inf" if v == INF else v


@dataclass
class CutReport:
    passed: bool
    r: float
    s: float
    gap_CA: float
    gap_CB: float
    disjoint_CA: bool
    disjoint_CB: bool
    chains_blocked: bool
    witness: list[int] | None = None

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "r": self.r,
            "s": self.s,
            "disjoint": {
                "C_A": {"gap": _ext(self.gap_CA), "pass": self.disjoint_CA},
                "C_B": {"gap": _ext(self.gap_CB), "pass": self.disjoint_CB},
            },
            "chains_blocked": self.chains_blocked,
            "witness": self.witness,
        }


@dataclass
class SeparatorReport:
    passed: bool
    m: float
    t: float
    clauses: dict[str, bool]
    gaps: dict[str, float]
    crossing_checked: int
    crossing_violations: list[tuple[int, float, float]] = field(default_factory=list)

    def failed_clauses(self) -> list[str]:
        return [k for k, ok in self.clauses.items() if not ok]

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "m": self.m,
            "t": self.t,
            "clauses": dict(self.clauses),
            "gaps": {k: _ext(v) for k, v in self.gaps.items()},
            "crossing_checked": self.crossing_checked,
            "crossing_violations": [
                {"x": x, "d_x_X2": d2, "d_x_C": _ext(dc)} for x, d2, dc in self.crossing_violations
            ],
        }


def _mask(space: FiniteMetricSpace, S) -> np.ndarray:
    out = np.zeros(space.n, dtype=bool)
    out[as_ids(space, S)] = True
    return out


def verify_cut(space: FiniteMetricSpace, A, B, C, params: ScaleParams) -> CutReport:
    """Check that C is far from A and B and that every r-chain from A to B meets B(C, s)."""
    if not (params.r > 0 and params.s > 0):
        raise CoarseInputError("verify_cut needs r > 0 and s > 0")
    gap_a = window_gap(space, C, A, params)
    gap_b = window_gap(space, C, B, params)
    keep = ~_mask(space, ball(space, C, params.s))
    a = as_ids(space, A)
    b = as_ids(space, B)
    a, b = a[keep[a]], b[keep[b]]
    witness = None
    if len(a) and len(b):
        graph = build_chain_graph(space, params.r)
        witness = shortest_chain(graph, a, b, keep)
    ok_a, ok_b = gap_a >= params.disjoint_gap, gap_b >= params.disjoint_gap
    blocked = witness is None
    return CutReport(ok_a and ok_b and blocked, params.r, params.s, gap_a, gap_b, ok_a, ok_b, blocked, witness)


class _FlowNet:
    """Edmonds-Karp on an explicit arc list; arcs are scanned in insertion order."""

    def __init__(self, size: int):
        self.head: list[list[int]] = [[] for _ in range(size)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add(self, u: int, v: int, c: int) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def _bfs(self, s: int) -> list[int]:
        via = [-1] * len(self.head)
        via[s] = -2
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.head[u]:
                v = self.to[e]
                if self.cap[e] > 0 and via[v] == -1:
                    via[v] = e
                    queue.append(v)
        return via

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            via = self._bfs(s)
            if via[t] == -1:
                return flow
            push, v = None, t
            while v != s:
                e = via[v]
                push = self.cap[e] if push is None else min(push, self.cap[e])
                v = self.to[e ^ 1]
            v = t
            while v != s:
                e = via[v]
                self.cap[e] -= push
                self.cap[e ^ 1] += push
                v = self.to[e ^ 1]
            flow += push

    def reachable(self, s: int) -> list[bool]:
        return [v != -1 for v in self._bfs(s)]


def find_min_cut(space: FiniteMetricSpace, A, B, r: float) -> frozenset[int]:
    """Fewest points outside A u B whose removal leaves no r-chain from A to B.

    Unit-capacity vertex-split max flow; the returned cut is the one closest
    to A (points whose in-copy is reachable in the final residual network).
    """
    a, b = as_ids(space, A), as_ids(space, B)
    if len(a) == 0 or len(b) == 0:
        raise CoarseInputError("find_min_cut needs nonempty A and B")
    graph = build_chain_graph(space, r)
    in_a, in_b = _mask(space, a), _mask(space, b)
    for x in a:
        if in_b[x] or in_b[graph.neighbors(x)].any():
            raise CoarseInputError("no interior cut exists: A and B touch at this scale")
    n = space.n
    big = n + 1
    net = _FlowNet(2 * n + 2)
    source, sink = 2 * n, 2 * n + 1
    for x in a:
        net.add(source, 2 * x, big)
    for v in range(n):
        net.add(2 * v, 2 * v + 1, big if (in_a[v] or in_b[v]) else 1)
        for w in graph.neighbors(v):
            net.add(2 * v + 1, 2 * int(w), big)
    for y in b:
        net.add(2 * y + 1, sink, big)
    net.max_flow(source, sink)
    seen = net.reachable(source)
    return frozenset(
        v for v in range(n) if not (in_a[v] or in_b[v]) and seen[2 * v] and not seen[2 * v + 1]
    )


def bisector_cut(space: FiniteMetricSpace, A, B, r: float) -> frozenset[int]:
    """Points on A's side of the hop-distance bisector that touch B's side.

    Every r-chain from A to B passes through this set; it sits roughly
    midway, which keeps it far from both A and B.
    """
    graph = build_chain_graph(space, r)
    da = hop_distances(graph, as_ids(space, A)).astype(np.float64)
    db = hop_distances(graph, as_ids(space, B)).astype(np.float64)
    da[da < 0] = INF
    db[db < 0] = INF
    a_side = (da <= db) & np.isfinite(da)
    b_side = db < da
    out = []
    for x in np.nonzero(a_side)[0]:
        if b_side[graph.neighbors(x)].any():
            out.append(int(x))
    return frozenset(out)


def reachable_partition(space: FiniteMetricSpace, A, C, params: ScaleParams) -> tuple[frozenset[int], frozenset[int]]:
    """X1 = points chained to A inside Y = X - B(C, s); X2 = the rest."""
    if not (params.r > 0 and params.s > 0):
        raise CoarseInputError("reachable_partition needs r > 0 and s > 0")
    keep = ~_mask(space, ball(space, C, params.s))
    x1 = reach(space, A, params.r, keep)
    return frozenset(np.nonzero(x1)[0].tolist()), frozenset(np.nonzero(~x1)[0].tolist())


def zero_dim_partition(space: FiniteMetricSpace, A, B, i_max: int) -> tuple[frozenset[int], frozenset[int]]:
    """X1 = A together with, for i = 1..i_max, the i-chain components of A minus those of B."""
    if i_max < 1:
        raise CoarseInputError("i_max must be at least 1")
    x1 = _mask(space, A)
    for i in range(1, i_max + 1):
        x1 |= reach(space, A, float(i)) & ~reach(space, B, float(i))
    return frozenset(np.nonzero(x1)[0].tolist()), frozenset(np.nonzero(~x1)[0].tolist())


def crossing_violations(
    space: FiniteMetricSpace,
    X1,
    X2,
    C,
    m: float,
    t: float,
    min_interior: float | None = None,
    exempt=(),
) -> tuple[int, list[tuple[int, float, float]]]:
    """Points x of X1 with d(x, X2) <= m but d(x, C) > t.

    Points whose interior mark is below ``min_interior`` and points in
    ``exempt`` are skipped.  Returns (number checked, violations).
    """
    x1 = as_ids(space, X1)
    if space.interior is not None and min_interior is not None:
        x1 = x1[space.interior[x1] >= min_interior]
    skip = as_ids(space, exempt)
    if len(skip):
        x1 = np.setdiff1d(x1, skip)
    to_x2 = distance_to_set(space, X2)[x1]
    near = x1[to_x2 <= m]
    if len(near) == 0:
        return 0, []
    to_c = distance_to_set(space, C)
    bad = near[to_c[near] > t]
    d2 = dict(zip(x1.tolist(), to_x2.tolist()))
    return len(near), [(int(x), d2[int(x)], float(to_c[x])) for x in bad]


def verify_separator(
    space: FiniteMetricSpace,
    A,
    B,
    C,
    X1,
    X2,
    params: ScaleParams,
    t: float | None = None,
    exempt_core: bool = False,
) -> SeparatorReport:
    """Check the separator clauses for C with the partition X = X1 u X2.

    X1 must be far from A and X2 far from B.  The witness clause requires
    every x in X1 within m of X2 to lie within t of C (default t = m*r + s),
    skipping points whose interior mark is below m*r + s.  With
    ``exempt_core`` points inside the bounded ball are skipped as well.
    """
    x1, x2 = _mask(space, X1), _mask(space, X2)
    if not np.all(x1 | x2):
        raise CoarseInputError("X1 u X2 must cover the space")
    m = params.m
    if t is None:
        t = m * params.r + params.s
    gaps = {
        "C_A": window_gap(space, C, A, params),
        "C_B": window_gap(space, C, B, params),
        "X1_A": window_gap(space, X1, A, params),
        "X2_B": window_gap(space, X2, B, params),
    }
    clauses = {"partition": True}
    for key, value in gaps.items():
        clauses[f"disjoint_{key}"] = value >= params.disjoint_gap
    exempt = ()
    if exempt_core:
        exempt = ball(space, [params.basepoint], params.bounded_rho)
    checked, bad = crossing_violations(
        space, X1, X2, C, m, t, min_interior=m * params.r + params.s, exempt=exempt
    )
    clauses["witness"] = not bad
    return SeparatorReport(all(clauses.values()), m, t, clauses, gaps, checked, bad)
