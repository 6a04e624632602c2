import numpy as np
import pytest
from hypothesis import given, strategies as st

from coarse.dimension import (
    Cover,
    component_growth,
    cover_multiplicity,
    estimate_asdg,
    estimate_asdim,
    estimate_lsind,
    verify_certificate,
)
from coarse.gallery import gen_exp_strips, gen_lattice, gen_locally_finite_group, integer_line
from coarse.metric import CoarseInputError, FiniteMetricSpace
from coarse.resemblance import ScaleParams

from conftest import line, random_space


def blocks(n, width):
    return Cover(tuple(frozenset(range(k, min(k + width, n))) for k in range(0, n, width)), width - 1)


def brute_multiplicity(space, cover, r):
    best = 0
    for x in range(space.n):
        hits = sum(any(space.d(x, u) < r for u in U) for U in cover.elements)
        best = max(best, hits)
    return best


def test_whole_space_cover():
    space = line(30)
    assert cover_multiplicity(space, Cover((frozenset(range(30)),), 29), 100) == 1


def test_block_cover_multiplicity():
    space = line(100)
    cover = blocks(100, 20)
    assert cover_multiplicity(space, cover, 5) == brute_multiplicity(space, cover, 5) == 2
    # the ball (15, 65) around 40 meets four blocks
    assert cover_multiplicity(space, cover, 25) == brute_multiplicity(space, cover, 25) == 4


def test_invalid_cover_rejected():
    space = line(10)
    with pytest.raises(CoarseInputError, match="cover"):
        cover_multiplicity(space, Cover((frozenset(range(5)),), 10), 1)
    with pytest.raises(CoarseInputError, match="diameter"):
        cover_multiplicity(space, Cover((frozenset(range(10)),), 3), 1)


def test_asdim_bounded_cluster():
    space = random_space(0, 12, box=2)
    cert = estimate_asdim(space, 1, 10)
    assert cert.estimate == 0
    assert cert.evidence["cover"]["elements"] == [list(range(12))]


def test_asdim_line_and_group():
    cert = estimate_asdim(integer_line(0, 1000), 10, 100)
    assert cert.estimate == 1 and cert.evidence["multiplicity"] == 2
    assert verify_certificate(integer_line(0, 1000), cert)
    lf = gen_locally_finite_group(8)
    cert = estimate_asdim(lf, 1.5, 4)
    assert cert.estimate == 0 and verify_certificate(lf, cert)


def test_asdg_lsind_bounded():
    space = random_space(1, 10, box=1)
    p = ScaleParams(r=1, window_R=10)
    assert estimate_asdg(space, None, p, 2).estimate == -1
    assert estimate_lsind(space, None, p, 2).estimate == -1


def lf_cosets(n_terms=8):
    space = gen_locally_finite_group(n_terms)
    shift = n_terms - 4
    A = [k for k in range(space.n) if k >> shift == 0]
    B = [k for k in range(space.n) if k >> shift == 0b1000]
    return space, A, B


def test_asdg_locally_finite_group():
    space, A, B = lf_cosets()
    p = ScaleParams(r=1.5, s=1, m=1.5, basepoint=0, window_R=2, disjoint_gap=3)
    cert = estimate_asdg(space, [(A, B)], p, 1)
    assert cert.estimate == 0
    assert cert.nodes[0].C == []
    assert verify_certificate(space, cert)


def test_asdg_exp_strips():
    space = gen_exp_strips(6, 1)
    p = ScaleParams(r=1.5, s=1, m=1.5, basepoint=space.locate((2, 0)), window_R=16, disjoint_gap=3)
    cert = estimate_asdg(space, [(space.subsets["TOP"], space.subsets["BOTTOM"])], p, 2)
    assert cert.estimate == 1
    C = cert.nodes[0].C
    assert sorted(space.coords[c][0] for c in C) == [2, 4, 8, 16, 32, 64]
    assert verify_certificate(space, cert)


def test_lsind_integer_line_single_point():
    space = integer_line(0, 100)
    p = ScaleParams(r=1.5, s=1, m=1.5, basepoint=50, window_R=20, disjoint_gap=2)
    cert = estimate_lsind(space, [(range(15), range(86, 101))], p, 1)
    assert cert.estimate == 0
    assert len(cert.nodes[0].C) == 1 and cert.nodes[0].child.estimate == -1
    assert cert.to_dict()["coverage"] == "pair-limited"
    assert verify_certificate(space, cert)


def test_lsind_lattice_edges():
    space = gen_lattice(2, 20, "l1")
    p = ScaleParams(r=2, s=1, m=2, basepoint=space.locate((10, 10)), window_R=10, disjoint_gap=4)
    pair = (space.subsets["FACE_LO_0"], space.subsets["FACE_HI_0"])
    cert = estimate_lsind(space, [pair], p, 2)
    assert cert.estimate == 1 and verify_certificate(space, cert)
    assert estimate_asdg(space, [pair], p, 2).estimate == 1


def test_pair_precondition():
    space = line(20)
    with pytest.raises(CoarseInputError, match="not disjoint"):
        estimate_asdg(space, [([0, 1], [2, 3])], ScaleParams(r=1.5, disjoint_gap=5), 1)


def test_depth_zero_is_exhausted():
    space = line(20)
    cert = estimate_asdg(space, [([0], [19])], ScaleParams(r=1.5, disjoint_gap=5), 0)
    assert cert.estimate is None and cert.status == "depth-exhausted"


def test_tampered_certificate_rejected():
    space = integer_line(0, 100)
    p = ScaleParams(r=1.5, s=1, m=1.5, basepoint=50, window_R=20, disjoint_gap=2)
    cert = estimate_asdg(space, [(range(15), range(86, 101))], p, 1)
    cert.nodes[0].C = []
    assert not verify_certificate(space, cert)


def test_growth_examples():
    iso = FiniteMetricSpace.from_points([[0.0], [10.0]])
    assert component_growth(iso, 0, [1, 2, 5]) == [(1, 0), (2, 0), (5, 0)]
    strips = gen_exp_strips(6, 1)
    rows = component_growth(strips, strips.locate((2, 0)), [1.5, 1.9])
    assert [d for _, d in rows] == [2, 2]
    assert component_growth(integer_line(0, 200), 0, [1.5]) == [(1.5, 200)]
    with pytest.raises(CoarseInputError):
        component_growth(iso, 0, [2, 1])


@given(st.integers(0, 10_000), st.lists(st.floats(0.2, 6), min_size=1, max_size=5, unique=True))
def test_growth_monotone(seed, radii):
    space = random_space(seed, 15)
    rows = component_growth(space, 0, sorted(radii))
    diam = [d for _, d in rows]
    assert diam == sorted(diam)


def test_growth_monotone_in_window():
    for r in (1.5, 3, 6):
        small = component_growth(integer_line(0, 50), 0, [r])[0][1]
        big = component_growth(integer_line(0, 100), 0, [r])[0][1]
        assert small <= big


@given(st.integers(0, 10_000), st.floats(0.5, 5), st.floats(1, 8))
def test_asdim_certificates_verify(seed, r, D):
    space = random_space(seed, 25)
    cert = estimate_asdim(space, r, D)
    assert verify_certificate(space, cert)
    cover = Cover(tuple(frozenset(U) for U in cert.evidence["cover"]["elements"]), D)
    assert not cover.problems(space)
    assert brute_multiplicity(space, cover, r) == cert.estimate + 1
