"""Seeded randomized campaigns behind ``coarse check props`` and the acceptance suite."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import oracles
from .chains import chain_metric, check_r_convexity
from .cuts import crossing_violations, find_min_cut, reachable_partition, verify_cut, verify_separator
from .metric import FiniteMetricSpace, ball, diameter, hausdorff_distance
from .resemblance import ScaleParams


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("COARSE_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class CampaignResult:
    name: str
    cases: int = 0
    premise_hits: int = 0
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "cases": self.cases,
            "premise_hits": self.premise_hits,
            "passed": self.passed,
            "counterexamples": self.counterexamples[:20],
            "counterexample_count": len(self.counterexamples),
        }


def _random_points(rng, n: int, box: float = 10.0) -> FiniteMetricSpace:
    return FiniteMetricSpace.from_points(rng.uniform(0.0, box, size=(n, 2)), "l2")


def _nonempty_subset(rng, pool: np.ndarray) -> list[int]:
    k = int(rng.integers(1, len(pool) + 1))
    return sorted(rng.choice(pool, size=k, replace=False).tolist())


def separator_case(seed: int, case: int) -> tuple[bool, bool, dict]:
    """One random instance of: separator (m = r, bound t) with A in X1, B in X2 => cut at s = t + 1.

    Returns (premise held, conclusion held, instance description).
    """
    rng = np.random.default_rng([seed, case])
    n = int(rng.integers(6, 41))
    space = _random_points(rng, n)
    X = space.coords
    theta = rng.uniform(0, np.pi)
    proj = X @ np.array([np.cos(theta), np.sin(theta)])
    order = np.argsort(proj, kind="stable")
    cut_at = int(rng.integers(1, n))
    x1 = np.sort(order[:cut_at])
    x2 = np.sort(order[cut_at:])
    r = float(rng.uniform(1.0, 4.0))
    A = _nonempty_subset(rng, x1)
    B = _nonempty_subset(rng, x2)
    mode = int(rng.integers(0, 3))
    if mode == 0:
        near = space.dist_block(x1, x2).min(axis=1) <= r
        C = x1[near].tolist()
    elif mode == 1:
        C = sorted(rng.choice(n, size=int(rng.integers(0, n // 2 + 1)), replace=False).tolist())
    else:
        C = []
    window = float(rng.choice([0.0, rng.uniform(0.0, 10.0), 20.0]))
    params = ScaleParams(
        r=r,
        s=float(rng.uniform(0.1, 2.0)),
        m=r,
        basepoint=int(rng.integers(0, n)),
        window_R=window,
        disjoint_gap=float(rng.uniform(0.1, 3.0)),
    )
    t = float(rng.uniform(0.0, 2 * r))
    sep = verify_separator(space, A, B, C, x1, x2, params, t=t)
    info = {"seed": seed, "case": case, "n": n, "r": r, "t": t, "A": A, "B": B, "C": C}
    if not sep.passed:
        return False, True, info
    cut = verify_cut(space, A, B, C, params.with_(s=t + 1))
    info["witness"] = cut.witness
    return True, cut.passed, info


def separator_implies_cut(seed: int = 0, cases: int = 200) -> CampaignResult:
    result = CampaignResult("separator=>cut", cases)
    with ThreadPoolExecutor(worker_count()) as pool:
        outcomes = list(pool.map(lambda k: separator_case(seed, k), range(cases)))
    for premise, conclusion, info in outcomes:
        result.premise_hits += premise
        if premise and not conclusion:
            result.counterexamples.append(info)
    return result


def far_pairs(space: FiniteMetricSpace, r: float, count: int, seed: int) -> list[tuple[list[int], list[int]]]:
    """Seeded pairs of small balls whose centres are at least half the diameter apart."""
    rng = np.random.default_rng(seed)
    diam = diameter(space, range(space.n))
    pairs = []
    while len(pairs) < count:
        p = int(rng.integers(0, space.n))
        row = space.dist_row(p)
        far = np.nonzero(row >= diam / 2)[0]
        if len(far) == 0:
            continue
        q = int(rng.choice(far))
        A = sorted(ball(space, [p], r))
        B = sorted(ball(space, [q], r))
        if space.dist_block(A, B).min() >= r:
            pairs.append((A, B))
    return pairs


def cut_bound_campaign(
    space: FiniteMetricSpace,
    r: float,
    s: float,
    pairs: int = 20,
    seed: int = 0,
    m_factors=(1, 2, 5),
    interior_only: bool = False,
) -> CampaignResult:
    """On an r-convex space: minimum cuts give partitions whose crossing points lie within m*r + s of C."""
    result = CampaignResult(f"cut=>separator-bound[{space.name}]")
    convex = check_r_convexity(space, r, max_listed=1)
    if not convex.convex:
        result.counterexamples.append({"reason": "space is not r-convex", "violations": convex.violation_count})
        return result
    params = ScaleParams(r=r, s=s, m=r)
    for k, (A, B) in enumerate(far_pairs(space, r, pairs, seed)):
        C = find_min_cut(space, A, B, r)
        cut = verify_cut(space, A, B, C, params)
        if not cut.chains_blocked:
            result.counterexamples.append({"pair": k, "reason": "min cut does not block chains"})
            continue
        X1, X2 = reachable_partition(space, A, C, params)
        for factor in m_factors:
            m = factor * r
            min_interior = m * r + s if interior_only else None
            checked, bad = crossing_violations(space, X1, X2, C, m, m * r + s, min_interior=min_interior)
            result.cases += 1
            result.premise_hits += checked
            for x, d2, dc in bad:
                result.counterexamples.append({"pair": k, "m": m, "x": x, "d_x_X2": d2, "d_x_C": dc})
    return result


def chain_metric_oracle(seed: int = 0, cases: int = 100, n: int = 12) -> CampaignResult:
    result = CampaignResult("chain_metric==hop_relaxation", cases)
    for case in range(cases):
        rng = np.random.default_rng([seed, 1, case])
        space = _random_points(rng, n)
        r = float(rng.uniform(1.0, 6.0))
        H = oracles.hop_relaxation(space.dist, r)
        result.premise_hits += 1
        for x in range(n):
            for y in range(n):
                got = chain_metric(space, x, y, r)
                want = None if H[x, y] == np.inf else int(H[x, y])
                if got != want:
                    result.counterexamples.append({"case": case, "x": x, "y": y, "got": got, "want": want})
    return result


def min_cut_oracle(seed: int = 0, cases: int = 50, n: int = 10) -> CampaignResult:
    result = CampaignResult("min_cut==exhaustive", cases)
    case = 0
    attempt = 0
    while case < cases:
        rng = np.random.default_rng([seed, 2, attempt])
        attempt += 1
        space = _random_points(rng, n)
        r = float(rng.uniform(2.0, 6.0))
        ids = rng.permutation(n)
        A = sorted(ids[: int(rng.integers(1, 3))].tolist())
        B = sorted(ids[-int(rng.integers(1, 3)) :].tolist())
        if space.dist_block(A, B).min() < r:
            continue
        got = len(find_min_cut(space, A, B, r))
        want = oracles.brute_min_vertex_cut(space.dist, r, A, B)
        result.premise_hits += got > 0
        if got != want:
            result.counterexamples.append({"attempt": attempt - 1, "got": got, "want": want})
        case += 1
    return result


def hausdorff_oracle(seed: int = 0, cases: int = 100, n: int = 20) -> CampaignResult:
    result = CampaignResult("hausdorff==brute_force", cases)
    for case in range(cases):
        rng = np.random.default_rng([seed, 3, case])
        space = _random_points(rng, n)
        A = rng.choice(n, size=8, replace=False).tolist()
        B = rng.choice(n, size=8, replace=False).tolist()
        got = hausdorff_distance(space, A, B)
        want = oracles.brute_hausdorff(space.dist, A, B)
        result.premise_hits += 1
        if got != want:
            result.counterexamples.append({"case": case, "got": got, "want": want})
    return result

