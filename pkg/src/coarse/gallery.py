"""Deterministic sample spaces with named subsets.

Every generator records how far each point sits from the truncation
boundary in ``interior`` so boundary-sensitive checks can skip clipped points.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .metric import CoarseInputError, FiniteMetricSpace

FAMILIES = ("exp-rays", "exp-strips", "lattice", "free-group", "lf-group", "random")


def _heights(top: float, h: float, bottom: float = 0.0) -> np.ndarray:
    k_lo = int(np.ceil(bottom / h - 1e-9))
    k_hi = int(np.floor(top / h + 1e-9))
    return np.arange(k_lo, k_hi + 1) * h


def gen_exp_rays(n_max: int = 10, T: float = 1024, h: float = 1.0) -> FiniteMetricSpace:
    """Vertical rays x = 2^n (n = 1..n_max) sampled at step h up to height T."""
    if n_max < 2 or not T > 0 or not 0 < h <= 1:
        raise CoarseInputError("exp-rays needs n_max >= 2, T > 0, 0 < h <= 1")
    ys = _heights(T, h)
    pts, interior, rays = [], [], []
    for n in range(1, n_max + 1):
        x = float(2**n)
        for y in ys:
            pts.append((x, y))
            interior.append(min(T - y, 2.0 ** (n_max + 1) - x))
            rays.append(n)
    rays = np.array(rays)
    ys_all = np.array([p[1] for p in pts])
    subsets = {
        "A": np.nonzero(ys_all == 0)[0],
        "B": np.nonzero(rays == 1)[0],
        "C": [0],
    }
    return FiniteMetricSpace.from_points(
        pts, "l2", interior=interior, subsets=subsets, name=f"exp_rays(n_max={n_max},T={T},h={h})"
    )


def gen_exp_strips(n_max: int = 6, h: float = 1.0) -> FiniteMetricSpace:
    """Vertical segments {2^n} x [-n, n] for n = 1..n_max sampled at step h."""
    if n_max < 2 or not 0 < h <= 1:
        raise CoarseInputError("exp-strips needs n_max >= 2 and 0 < h <= 1")
    pts, interior, top, bottom = [], [], [], []
    for n in range(1, n_max + 1):
        x = float(2**n)
        ys = _heights(n, h, -n)
        bottom.append(len(pts))
        for y in ys:
            pts.append((x, y))
            interior.append(2.0 ** (n_max + 1) - x)
        top.append(len(pts) - 1)
    return FiniteMetricSpace.from_points(
        pts,
        "l2",
        interior=interior,
        subsets={"TOP": top, "BOTTOM": bottom},
        name=f"exp_strips(n_max={n_max},h={h})",
    )


_NORMS = {"l1": "l1", "l2": "l2", "linf": "linf"}


def gen_lattice(dim: int = 2, side: int = 20, norm: str = "l1") -> FiniteMetricSpace:
    """Integer grid [0, side)^dim; point ids follow itertools.product order."""
    norm = norm.lower()
    if dim not in (1, 2, 3) or side < 2 or norm not in _NORMS:
        raise CoarseInputError("lattice needs dim in {1,2,3}, side >= 2, norm in l1/l2/linf")
    pts = np.array(list(itertools.product(range(side), repeat=dim)), dtype=np.float64)
    interior = np.minimum(pts, side - 1 - pts).min(axis=1)
    subsets = {}
    for axis in range(dim):
        subsets[f"FACE_LO_{axis}"] = np.nonzero(pts[:, axis] == 0)[0]
        subsets[f"FACE_HI_{axis}"] = np.nonzero(pts[:, axis] == side - 1)[0]
    return FiniteMetricSpace.from_points(
        pts, _NORMS[norm], interior=interior, subsets=subsets, name=f"lattice(dim={dim},side={side},{norm})"
    )


_LETTERS = "abAB"
_INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}


def free_group_words(rank: int, radius: int) -> list[str]:
    """Reduced words of length <= radius, breadth first, generators ordered a, b, A, B."""
    gens = [c for c in _LETTERS if c.lower() in "ab"[:rank]]
    words = [""]
    frontier = [""]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for g in gens:
                if w and _INVERSE[w[-1]] == g:
                    continue
                nxt.append(w + g)
        words.extend(nxt)
        frontier = nxt
    return words


def gen_free_group_ball(rank: int = 2, radius: int = 5) -> FiniteMetricSpace:
    """Ball of the given radius in the Cayley graph of the free group, word metric."""
    if rank not in (1, 2) or radius < 0 or radius > 7:
        raise CoarseInputError("free-group ball needs rank in {1,2} and 0 <= radius <= 7")
    words = free_group_words(rank, radius)
    index = {w: i for i, w in enumerate(words)}
    rows, cols = [], []
    for w, i in index.items():
        if w:
            j = index[w[:-1]]
            rows += [i, j]
            cols += [j, i]
    tree = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(words), len(words)))
    # the ball is geodesically convex in the Cayley tree, so tree distance is the word metric
    matrix = shortest_path(tree, unweighted=True, directed=False)
    lengths = np.array([len(w) for w in words], dtype=np.float64)
    subsets = {}
    gens = "ab"[:rank]
    for axis, g in enumerate(gens):
        subsets[f"FACE_LO_{axis}"] = [i for w, i in index.items() if len(w) == radius and w[0] == g]
        subsets[f"FACE_HI_{axis}"] = [i for w, i in index.items() if len(w) == radius and w[0] == _INVERSE[g]]
    return FiniteMetricSpace.from_matrix(
        matrix,
        labels=[w or "e" for w in words],
        interior=radius - lengths,
        subsets=subsets,
        name=f"free_group_ball(rank={rank},radius={radius})",
    )


def gen_locally_finite_group(n_terms: int = 10) -> FiniteMetricSpace:
    """(Z/2)^n_terms with d(g, h) = largest 1-based index where g and h differ.

    Point id k is the element whose bit i-1 equals coordinate i, so the
    subgroup supported on the first j coordinates is ids 0..2^j - 1.
    """
    if not 2 <= n_terms <= 14:
        raise CoarseInputError("locally finite group needs 2 <= n_terms <= 14")
    ids = np.arange(2**n_terms)
    bits = (ids[:, None] >> np.arange(n_terms)[None, :]) & 1
    return FiniteMetricSpace.from_points(
        bits,
        "ultra",
        interior=np.full(len(ids), float(n_terms)),
        name=f"locally_finite_group(n_terms={n_terms})",
    )


def gen_random(n: int = 20, dim: int = 2, box: float = 10.0, seed: int = 0) -> FiniteMetricSpace:
    if not 0 <= n <= 5000 or dim < 1 or not box > 0:
        raise CoarseInputError("random space needs 0 <= n <= 5000, dim >= 1, box > 0")
    rng = np.random.default_rng(seed)
    return FiniteMetricSpace.from_points(
        rng.uniform(0.0, box, size=(n, dim)), "l2", name=f"random(n={n},dim={dim},box={box},seed={seed})"
    )


def integer_line(lo: int, hi: int) -> FiniteMetricSpace:
    """Points lo..hi on the real line."""
    return FiniteMetricSpace.from_points(np.arange(lo, hi + 1, dtype=np.float64)[:, None], "l1", name=f"line({lo}..{hi})")
