"""Dimension estimators with re-verifiable certificates.

None of these compute a true asymptotic invariant.  ``estimate_asdim``
returns the best multiplicity it found minus one (an upper-bound witness);
``estimate_asdg`` and ``estimate_lsind`` recurse over the pairs they were
given, so their value only speaks for those pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .chains import chain_component, component_labels
from .cuts import (
    bisector_cut,
    find_min_cut,
    reachable_partition,
    verify_cut,
    verify_separator,
    zero_dim_partition,
)
from .metric import CoarseInputError, FiniteMetricSpace, as_ids, ball, diameter, distance_to_set
from .resemblance import ScaleParams, disjoint_at_scale, is_bounded_at

ASDIM, ASDG, LSIND = "ASDIM", "ASDG", "LSIND"


@dataclass(frozen=True)
class Cover:
    elements: tuple[frozenset[int], ...]
    diameter_bound: float

    def problems(self, space: FiniteMetricSpace) -> list[str]:
        out = []
        covered = set().union(*self.elements) if self.elements else set()
        if len(covered) != space.n or (covered and (min(covered) < 0 or max(covered) >= space.n)):
            out.append("union of elements is not the whole space")
        for k, U in enumerate(self.elements):
            if diameter(space, U) > self.diameter_bound:
                out.append(f"element {k} has diameter above {self.diameter_bound}")
        return out

    def to_dict(self) -> dict:
        return {"diameter_bound": self.diameter_bound, "elements": [sorted(U) for U in self.elements]}


def cover_multiplicity(space: FiniteMetricSpace, cover: Cover, r: float) -> int:
    """Largest number of cover elements met by one open r-ball around a point."""
    bad = cover.problems(space)
    if bad:
        raise CoarseInputError("invalid cover: " + "; ".join(bad))
    counts = np.zeros(space.n, dtype=np.int64)
    for U in cover.elements:
        if U:
            counts += distance_to_set(space, U) < r
    return int(counts.max()) if space.n else 0


def _net_cover(space: FiniteMetricSpace, D: float) -> Cover:
    centers = [0]
    near = space.dist_row(0).copy()
    while near.max() > D / 2:
        c = int(np.argmax(near))
        centers.append(c)
        near = np.minimum(near, space.dist_row(c))
    centers.sort()
    owner = np.argmin(space.dist_block(np.arange(space.n), centers), axis=1)
    cells = [frozenset(np.nonzero(owner == k)[0].tolist()) for k in range(len(centers))]
    return Cover(tuple(c for c in cells if c), D)


def _brick_covers(space: FiniteMetricSpace, D: float) -> list[Cover]:
    if space.coords is None or space.metric not in ("l1", "l2", "linf"):
        return []
    dim = space.dim
    side = D / {"linf": 1.0, "l2": math.sqrt(dim), "l1": float(dim)}[space.metric]
    X = space.coords
    rest = np.floor(X[:, 1:] / side).astype(np.int64)
    shifts = [np.zeros(space.n)]
    if dim > 1:
        shifts.append((rest.sum(axis=1) % 2) * side / 2)
    out = []
    for shift in shifts:
        first = np.floor((X[:, 0] - shift) / side).astype(np.int64)
        keys = np.column_stack([first, rest])
        _, owner = np.unique(keys, axis=0, return_inverse=True)
        owner = owner.ravel()
        out.append(Cover(tuple(frozenset(np.nonzero(owner == k)[0].tolist()) for k in range(owner.max() + 1)), D))
    return out


def _component_cover(space: FiniteMetricSpace, r: float, D: float) -> Cover:
    labels = component_labels(space, r)
    return Cover(tuple(frozenset(np.nonzero(labels == k)[0].tolist()) for k in np.unique(labels)), D)


@dataclass
class DimensionCertificate:
    kind: str
    estimate: int | None
    status: str  # ok | bounded | vacuous | depth-exhausted | no-candidate
    params: dict
    depth: int = 0
    n_points: int = 0
    evidence: dict = field(default_factory=dict)
    nodes: list["PairNode"] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "estimate": self.estimate,
            "status": self.status,
            "params": self.params,
            "depth": self.depth,
            "n_points": self.n_points,
        }
        if self.kind == ASDIM:
            out["evidence"] = self.evidence
        else:
            out["coverage"] = "pair-limited"
            out["pairs"] = [node.to_dict() for node in self.nodes]
        return out


@dataclass
class PairNode:
    index: int
    A: list[int]
    B: list[int]
    candidate: str
    C: list[int]
    report: dict
    child: DimensionCertificate
    partition: tuple[list[int], list[int]] | None = None

    def to_dict(self) -> dict:
        out = {
            "pair": self.index,
            "A": self.A,
            "B": self.B,
            "candidate": self.candidate,
            "C": self.C,
            "report": self.report,
            "child": self.child.to_dict(),
        }
        if self.partition is not None:
            out["partition"] = {"X1": self.partition[0], "X2": self.partition[1]}
        return out


def estimate_asdim(space: FiniteMetricSpace, r: float, D: float) -> DimensionCertificate:
    """Upper-bound witness for the r-multiplicity of covers with diameter <= D."""
    if not (r > 0 and D > 0):
        raise CoarseInputError("estimate_asdim needs r > 0 and D > 0")
    params = {"r": r, "D": D}
    if space.n == 0:
        return DimensionCertificate(ASDIM, -1, "bounded", params, evidence={"multiplicity": 0})
    candidates: list[tuple[str, Cover]] = []
    whole = frozenset(range(space.n))
    if diameter(space, whole) <= D:
        candidates.append(("whole", Cover((whole,), D)))
    else:
        candidates.append(("components", _component_cover(space, r, D)))
        candidates.append(("net", _net_cover(space, D)))
        for k, cover in enumerate(_brick_covers(space, D)):
            candidates.append((f"brick{k}", cover))
    best = None
    for name, cover in candidates:
        if cover.problems(space):
            continue
        mult = cover_multiplicity(space, cover, r)
        if best is None or mult < best[1]:
            best = (name, mult, cover)
    name, mult, cover = best
    evidence = {"construction": name, "multiplicity": mult, "cover": cover.to_dict()}
    return DimensionCertificate(ASDIM, mult - 1, "ok", params, n_points=space.n, evidence=evidence)


def default_pairs(space: FiniteMetricSpace, params: ScaleParams) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Ends of a 2-approximate diameter, each grown by window_R / 10."""
    if space.n < 2:
        return []
    p = int(np.argmax(space.dist_row(0)))
    q = int(np.argmax(space.dist_row(p)))
    if p == q:
        return []
    grow = params.window_R / 10
    return [(frozenset({p}) | ball(space, [p], grow), frozenset({q}) | ball(space, [q], grow))]


def _child_params(space: FiniteMetricSpace, C: np.ndarray, params: ScaleParams) -> ScaleParams:
    if len(C) == 0:
        return params.with_(basepoint=0)
    d = space.dist_block([params.basepoint], C)[0]
    return params.with_(basepoint=int(np.argmin(d)))


def _cut_candidates(space, A, B, params, extra) -> list[tuple[str, frozenset[int]]]:
    out = []
    try:
        cut = find_min_cut(space, A, B, params.r)
        out.append(("min-cut", cut))
        out.append(("min-cut-thickened", ball(space, cut, params.s) | cut))
    except CoarseInputError:
        pass
    out.append(("bisector", bisector_cut(space, A, B, params.r)))
    for name, members in (extra or {}).items():
        out.append((f"named:{name}", frozenset(members)))
    seen, unique = set(), []
    for name, C in out:
        if C not in seen:
            seen.add(C)
            unique.append((name, C))
    return unique


def _partitions(space, A, B, C, params, i_max):
    reach = reachable_partition(space, A, C, params)
    zero = zero_dim_partition(space, A, B, i_max)
    return [reach, reach[::-1], zero, zero[::-1]]


def _estimate(space, pairs, params, depth, kind, extra, i_max, user_pairs) -> DimensionCertificate:
    everything = range(space.n)
    cert = DimensionCertificate(kind, None, "depth-exhausted", params.to_dict(), depth, space.n)
    if is_bounded_at(space, everything, params):
        cert.estimate, cert.status = -1, "bounded"
        return cert
    if depth == 0:
        return cert
    if pairs is None:
        pairs = [p for p in default_pairs(space, params) if disjoint_at_scale(space, *p, params)]
    elif user_pairs:
        for k, (A, B) in enumerate(pairs):
            if not disjoint_at_scale(space, A, B, params):
                raise CoarseInputError(f"pair {k} is not disjoint at this scale")
    if not pairs:
        cert.estimate, cert.status = 0, "vacuous"
        return cert
    exhausted = False
    for k, (A, B) in enumerate(pairs):
        A, B = space.subset(A), space.subset(B)
        best: PairNode | None = None
        for name, C in _cut_candidates(space, A, B, params, extra):
            c_ids = as_ids(space, C)
            if kind == ASDG:
                report = verify_cut(space, A, B, C, params)
                if not report.passed:
                    continue
                partition = None
            else:
                for X1, X2 in _partitions(space, A, B, C, params, i_max):
                    report = verify_separator(space, A, B, C, X1, X2, params)
                    if report.passed:
                        partition = (sorted(X1), sorted(X2))
                        break
                else:
                    continue
            child = _estimate(
                space.subspace(c_ids), None, _child_params(space, c_ids, params), depth - 1, kind, None, i_max, False
            )
            if child.estimate is None:
                exhausted = True
                continue
            node = PairNode(k, sorted(A), sorted(B), name, c_ids.tolist(), report.to_dict(), child, partition)
            if best is None or child.estimate < best.child.estimate:
                best = node
            if child.estimate == -1:
                break
        if best is None:
            cert.status = "depth-exhausted" if exhausted else "no-candidate"
            cert.nodes = []
            return cert
        cert.nodes.append(best)
    cert.estimate = 1 + max(node.child.estimate for node in cert.nodes)
    cert.status = "ok"
    return cert


def estimate_asdg(
    space: FiniteMetricSpace,
    pairs: Sequence[tuple] | None,
    params: ScaleParams,
    depth: int,
    candidates: Mapping[str, Sequence[int]] | None = None,
) -> DimensionCertificate:
    """Depth-limited cut recursion over the given pairs (generated when None)."""
    if depth < 0:
        raise CoarseInputError("depth must be nonnegative")
    return _estimate(space, pairs, params, depth, ASDG, candidates, 6, pairs is not None)


def estimate_lsind(
    space: FiniteMetricSpace,
    pairs: Sequence[tuple] | None,
    params: ScaleParams,
    depth: int,
    candidates: Mapping[str, Sequence[int]] | None = None,
    i_max: int = 6,
) -> DimensionCertificate:
    """Same recursion as :func:`estimate_asdg` with separators in place of cuts.

    Each candidate C is tried with the reachable partition and the
    zero-dimensional partition, each in both orientations.
    """
    if depth < 0:
        raise CoarseInputError("depth must be nonnegative")
    return _estimate(space, pairs, params, depth, LSIND, candidates, i_max, pairs is not None)


def verify_certificate(space: FiniteMetricSpace, cert: DimensionCertificate) -> bool:
    """Recompute every report in the certificate and compare with what it records."""
    if cert.kind == ASDIM:
        ev = cert.evidence
        if "cover" not in ev:
            return cert.estimate == -1 and space.n == 0
        cover = Cover(tuple(frozenset(U) for U in ev["cover"]["elements"]), ev["cover"]["diameter_bound"])
        if cover.problems(space):
            return False
        mult = cover_multiplicity(space, cover, cert.params["r"])
        return mult == ev["multiplicity"] and cert.estimate == mult - 1
    params = ScaleParams(**cert.params)
    bounded = is_bounded_at(space, range(space.n), params)
    if cert.status == "bounded":
        return bounded and cert.estimate == -1
    if bounded:
        return False
    if cert.status != "ok":
        return cert.estimate is None or cert.status == "vacuous"
    for node in cert.nodes:
        if cert.kind == ASDG:
            report = verify_cut(space, node.A, node.B, node.C, params)
        else:
            X1, X2 = node.partition
            report = verify_separator(space, node.A, node.B, node.C, X1, X2, params)
        if not report.passed or report.to_dict() != node.report:
            return False
        if not verify_certificate(space.subspace(node.C), node.child):
            return False
    return cert.estimate == 1 + max(node.child.estimate for node in cert.nodes)


def component_growth(space: FiniteMetricSpace, x: int, r_list: Sequence[float]) -> list[tuple[float, float]]:
    """Diameter of the chain component [x]_r for each r."""
    r_list = [float(r) for r in r_list]
    if any(r <= 0 for r in r_list) or any(b <= a for a, b in zip(r_list, r_list[1:])):
        raise CoarseInputError("r_list must be positive and increasing")
    return [(r, diameter(space, chain_component(space, x, r))) for r in r_list]
