import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from coarse.metric import (
    INF,
    CoarseInputError,
    FiniteMetricSpace,
    ball,
    diameter,
    hausdorff_distance,
    set_distance,
    validate_metric,
)
from coarse.oracles import brute_hausdorff

from conftest import line, random_space


def test_three_point_metric_is_valid():
    space = FiniteMetricSpace.from_matrix([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    assert validate_metric(space) == []


def test_triangle_violation_names_points_and_defect():
    space = FiniteMetricSpace.from_matrix([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    found = validate_metric(space)
    tri = [v for v in found if v.kind == "triangle"]
    assert tri
    assert max(v.defect for v in tri) == pytest.approx(3.0)
    assert any(set(v.points) == {0, 1, 2} for v in tri)


def test_asymmetry_and_negative_diagonal_reported():
    found = validate_metric(FiniteMetricSpace.from_matrix([[0, 1], [2, 0]]))
    assert {v.kind for v in found} >= {"asymmetric"}


def test_random_coordinate_space_valid():
    space = random_space(7, 10)
    assert validate_metric(space) == []
    # brute-force triple scan on the materialised matrix
    D = space.dist
    assert all(D[i, k] <= D[i, j] + D[j, k] + 1e-9 for i in range(10) for j in range(10) for k in range(10))


def test_set_distance_conventions():
    space = line(10)
    assert set_distance(space, [1, 2], [2, 3]) == 0
    assert set_distance(space, [], [1]) == INF
    assert set_distance(space, [0], [5]) == 5


def test_infinity_is_absorbing():
    assert INF > 1e300
    assert INF + 5 == INF


def test_hausdorff_examples():
    space = line(10)
    assert hausdorff_distance(space, [1, 4], [1, 4]) == 0
    assert hausdorff_distance(space, [0], [3]) == 3
    assert hausdorff_distance(space, [], []) == 0
    assert hausdorff_distance(space, [], [3]) == INF


def test_hausdorff_matches_brute_force():
    space = random_space(3, 20)
    rng = np.random.default_rng(3)
    for _ in range(20):
        A = rng.choice(20, 8, replace=False).tolist()
        B = rng.choice(20, 8, replace=False).tolist()
        assert hausdorff_distance(space, A, B) == brute_hausdorff(space.dist, A, B)


def test_ball_examples():
    space = line(10)
    assert ball(space, [4], 0) == frozenset()
    assert ball(space, [4], 1) == {4}
    assert ball(space, [5], 2.5) == {3, 4, 5, 6, 7}
    assert ball(space, [], 3) == frozenset()
    with pytest.raises(CoarseInputError):
        ball(space, [1], -1)


def test_ball_is_open():
    assert ball(line(10), [5], 2) == {4, 5, 6}


def test_diameter():
    assert diameter(line(10), [2, 7, 4]) == 5
    assert diameter(line(10), []) == 0


def test_lazy_blocks_agree_with_matrix():
    space = random_space(1, 50, dim=3)
    full = FiniteMetricSpace.from_matrix(space.dist)
    ids = np.arange(50)
    assert np.array_equal(space.dist_block(ids[:7], ids), full.dist_block(ids[:7], ids))


def test_unknown_point_rejected():
    with pytest.raises(CoarseInputError):
        line(3).check_point(3)
    with pytest.raises(CoarseInputError):
        line(3).subset([0, 9])


def test_subspace_inherits_metric():
    space = line(10)
    sub = space.subspace([2, 5, 9])
    assert sub.n == 3
    assert sub.d(0, 2) == 7
    assert list(sub.parent_ids) == [2, 5, 9]


subsets = st.lists(st.integers(0, 11), min_size=1, max_size=6, unique=True)


@given(st.integers(0, 10_000), subsets, subsets, subsets)
def test_hausdorff_symmetric_and_triangle(seed, A, B, C):
    space = random_space(seed, 12)
    h = lambda X, Y: hausdorff_distance(space, X, Y)  # noqa: E731
    assert h(A, B) == h(B, A)
    assert h(A, C) <= h(A, B) + h(B, C) + 1e-12
    assert set_distance(space, A, B) <= h(A, B)
    assert (h(A, B) == 0) == (set(A) == set(B))


@given(st.integers(0, 10_000), subsets, subsets, st.floats(0, 8), st.floats(0, 8))
def test_ball_monotone(seed, A, extra, r1, r2):
    space = random_space(seed, 12)
    lo, hi = sorted((r1, r2))
    assert ball(space, A, lo) <= ball(space, A, hi)
    assert ball(space, A, lo) <= ball(space, set(A) | set(extra), lo)


def test_inf_rendering_in_set_distance_is_math_inf():
    assert math.isinf(set_distance(line(2), [], []))
