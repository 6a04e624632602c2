"""Brute-force reference computations, deliberately independent of the fast paths.

They only use the raw distance matrix and plain Python loops; nothing here
calls into chains, cuts or the metric helpers.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def hop_relaxation(dist: np.ndarray, r: float) -> np.ndarray:
    """All-pairs minimum r-chain length by n rounds of hop relaxation (inf = unreachable)."""
    n = len(dist)
    step = (dist < r) & ~np.eye(n, dtype=bool)
    H = np.full((n, n), math.inf)
    np.fill_diagonal(H, 0.0)
    for _ in range(n):
        nxt = H.copy()
        for i in range(n):
            for k in range(n):
                if H[i, k] == math.inf:
                    continue
                for j in range(n):
                    if step[k, j] and H[i, k] + 1 < nxt[i, j]:
                        nxt[i, j] = H[i, k] + 1
        if np.array_equal(nxt, H):
            break
        H = nxt
    return H


def brute_hausdorff(dist: np.ndarray, A, B) -> float:
    A, B = list(A), list(B)
    if not A and not B:
        return 0.0
    if not A or not B:
        return math.inf
    forward = max(min(dist[a][b] for b in B) for a in A)
    backward = max(min(dist[a][b] for a in A) for b in B)
    return float(max(forward, backward))


def _joined(dist: np.ndarray, r: float, A, B, removed: set) -> bool:
    n = len(dist)
    seen = {a for a in A if a not in removed}
    stack = list(seen)
    targets = set(B)
    while stack:
        x = stack.pop()
        if x in targets:
            return True
        for y in range(n):
            if y not in seen and y not in removed and y != x and dist[x][y] < r:
                seen.add(y)
                stack.append(y)
    return False


def brute_min_vertex_cut(dist: np.ndarray, r: float, A, B) -> int:
    """Smallest number of points outside A u B whose removal separates A from B."""
    n = len(dist)
    inner = [v for v in range(n) if v not in set(A) | set(B)]
    for size in range(len(inner) + 1):
        for removed in itertools.combinations(inner, size):
            if not _joined(dist, r, A, B, set(removed)):
                return size
    raise ValueError("A and B cannot be separated by interior points")
