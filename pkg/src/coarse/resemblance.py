"""Asymptotic resemblance of a metric space, quantified at explicit scales.

"Alike" means Hausdorff distance at most ``m``; "bounded" and "asymptotically
disjoint" are judged inside a window around a basepoint described by
:class:`ScaleParams`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .metric import (
    CoarseInputError,
    FiniteMetricSpace,
    as_ids,
    ball,
    diameter,
    distance_to_set,
    hausdorff_distance,
    set_distance,
)


@dataclass(frozen=True)
class ScaleParams:
    """Finite stand-ins for the "at infinity" quantifiers.

    r: chain scale; s: thickening of cut sets; m: alikeness scale;
    basepoint/window_R: points inside the open window ball are discarded
    before gaps are measured; bounded_rho: sets inside the open ball of this
    radius count as bounded (default window_R / 4); disjoint_gap: minimum
    truncated gap certifying asymptotic disjointness.
    """

    r: float = 1.0
    s: float = 1.0
    m: float = 1.0
    basepoint: int = 0
    window_R: float = 0.0
    bounded_rho: float | None = None
    disjoint_gap: float = 1.0

    def __post_init__(self):
        if self.bounded_rho is None:
            object.__setattr__(self, "bounded_rho", self.window_R / 4)
        for key in ("r", "s", "m", "window_R", "bounded_rho"):
            if getattr(self, key) < 0:
                raise CoarseInputError(f"{key} must be nonnegative")
        if self.bounded_rho > self.window_R:
            raise CoarseInputError("bounded_rho may not exceed window_R")
        if not self.disjoint_gap > 0:
            raise CoarseInputError("disjoint_gap must be positive")

    def with_(self, **changes) -> "ScaleParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GapProfile:
    radii: tuple[float, ...]
    gaps: tuple[float, ...]

    def rows(self) -> list[tuple[float, float]]:
        return list(zip(self.radii, self.gaps))


def alike_at_scale(space: FiniteMetricSpace, A, B, m: float) -> bool:
    if m < 0:
        raise CoarseInputError("alikeness scale must be nonnegative")
    return hausdorff_distance(space, A, B) <= m


def split_alike(space: FiniteMetricSpace, A, B1, B2, m: float) -> tuple[frozenset[int], frozenset[int]]:
    """Split A along a union B1 u B2 it resembles at scale m.

    Returns ``A_i = {a in A : d(a, B_i) <= m}``; each part is nonempty,
    they cover A and ``A_i`` is alike ``B_i`` at scale m.
    """
    a, b1, b2 = as_ids(space, A), as_ids(space, B1), as_ids(space, B2)
    if len(b1) == 0 or len(b2) == 0:
        raise CoarseInputError("split_alike: B1 and B2 must be nonempty")
    if not alike_at_scale(space, a, np.union1d(b1, b2), m):
        raise CoarseInputError("split_alike: A is not alike B1 u B2 at this scale")
    d1 = distance_to_set(space, b1)[a]
    d2 = distance_to_set(space, b2)[a]
    return frozenset(a[d1 <= m].tolist()), frozenset(a[d2 <= m].tolist())


def truncate(space: FiniteMetricSpace, A, x0: int, radius: float) -> np.ndarray:
    """A minus the open ball of ``radius`` around ``x0``."""
    a = as_ids(space, A)
    if len(a) == 0 or radius <= 0:
        return a
    return a[space.dist_block([space.check_point(x0)], a)[0] >= radius]


def gap_profile(space: FiniteMetricSpace, A, B, x0: int, radii: Sequence[float]) -> GapProfile:
    radii = [float(v) for v in radii]
    if any(v < 0 for v in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
        raise CoarseInputError("radii must be nonnegative and strictly increasing")
    gaps = tuple(
        set_distance(space, truncate(space, A, x0, rho), truncate(space, B, x0, rho)) for rho in radii
    )
    return GapProfile(tuple(radii), gaps)


def window_gap(space: FiniteMetricSpace, A, B, params: ScaleParams) -> float:
    x0, R = params.basepoint, params.window_R
    return set_distance(space, truncate(space, A, x0, R), truncate(space, B, x0, R))


def disjoint_at_scale(space: FiniteMetricSpace, A, B, params: ScaleParams) -> bool:
    """Gap between A and B outside the window is at least ``disjoint_gap``."""
    return window_gap(space, A, B, params) >= params.disjoint_gap


def is_bounded_at(space: FiniteMetricSpace, A, params: ScaleParams) -> bool:
    a = as_ids(space, A)
    if len(a) == 0:
        return True
    if params.bounded_rho == 0:
        return False
    return bool(np.all(space.dist_block([space.check_point(params.basepoint)], a)[0] < params.bounded_rho))


@dataclass(frozen=True)
class ControlProfile:
    radii: tuple[float, ...]
    expansion: tuple[float, ...]
    bounded_rho: float
    max_preimage_diameter: float

    def rows(self) -> list[tuple[float, float]]:
        return list(zip(self.radii, self.expansion))


def coarse_control_profile(
    source: FiniteMetricSpace,
    target: FiniteMetricSpace,
    mapping: Sequence[int],
    radii: Iterable[float],
    bounded_rho: float = 1.0,
) -> ControlProfile:
    """For each r, the largest d'(f(x), f(y)) over pairs with d(x, y) < r.

    Also reports properness: the largest source diameter of the preimage of
    an open target ball of radius ``bounded_rho``.
    """
    f = np.asarray(mapping, dtype=np.int64)
    if f.shape != (source.n,):
        raise CoarseInputError("map must assign one target id to every source point")
    if source.n and (f.min() < 0 or f.max() >= target.n):
        raise CoarseInputError("map sends points to unknown target ids")
    radii = tuple(float(v) for v in radii)
    best = [0.0] * len(radii)
    ids = np.arange(source.n)
    for chunk in source.row_chunks(ids, source.n):
        d = source.dist_block(chunk, ids)
        dt = target.dist_block(f[chunk], f)
        for k, r in enumerate(radii):
            sel = dt[d < r]
            if sel.size:
                best[k] = max(best[k], float(sel.max()))
    worst = 0.0
    image = np.unique(f)
    for t in range(target.n):
        near = target.dist_block([t], image)[0] < bounded_rho
        if not near.any():
            continue
        pre = np.nonzero(np.isin(f, image[near]))[0]
        worst = max(worst, diameter(source, pre))
    return ControlProfile(radii, tuple(best), float(bounded_rho), worst)


__all__ = [
    "ControlProfile",
    "GapProfile",
    "ScaleParams",
    "alike_at_scale",
    "ball",
    "coarse_control_profile",
    "disjoint_at_scale",
    "gap_profile",
    "is_bounded_at",
    "split_alike",
    "truncate",
    "window_gap",
]
