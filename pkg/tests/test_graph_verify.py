import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from circulant8.graph_verify import (
    bfs_distances,
    build_circulant,
    cvp_distances,
    cvp_oracle,
    diameter,
    distance_profile,
    verify_case_coverage,
    verify_covering,
)
from circulant8.lattice_core import ZERO, build_system
from circulant8.quotient_iso import generator_set, project
from circulant8.reduction_engine import reduce

from oracles import all_pairs_diameter, brute_cvp, naive_bfs


def test_build_valid():
    g = build_circulant(32, [1, 4, 6, 15])
    assert g.connection == (1, 4, 6, 15) and g.degree == 8
    build_circulant(104, [1, 16, 20, 27])


@pytest.mark.parametrize(
    "n,steps",
    [(10, [1, 5]), (10, [0, 1]), (10, [1, 10]), (10, [1, 1]), (10, [1, 9]), (10, []), (1, [1])],
)
def test_build_rejects(n, steps):
    with pytest.raises(ValueError):
        build_circulant(n, steps)


def test_base_case_diameters():
    assert diameter(build_circulant(32, [1, 4, 6, 15])) == 2
    assert diameter(build_circulant(104, [1, 16, 20, 27])) == 3


def test_small_diameter_against_all_pairs():
    assert diameter(build_circulant(13, [1, 5])) == 2 == all_pairs_diameter(13, [1, 5])


def test_disconnected_rejected():
    with pytest.raises(ValueError):
        diameter(build_circulant(12, [2, 4]))


def test_profiles():
    assert distance_profile(build_circulant(32, [1, 4, 6, 15])).histogram == (1, 8, 23)
    assert distance_profile(build_circulant(5, [1])).histogram == (1, 2, 2)


@st.composite
def circulants(draw):
    n = draw(st.integers(3, 120))
    pool = list(range(1, (n + 1) // 2))
    steps = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=4, unique=True))
    return n, steps


@given(circulants())
def test_bfs_matches_naive(g):
    n, steps = g
    c = build_circulant(n, steps)
    dist = bfs_distances(c)
    assert dist.tolist() == naive_bfs(n, steps)
    prof = distance_profile(c)
    assert prof.histogram[0] == 1 and prof.total == int((dist >= 0).sum())
    if math.gcd(n, *steps) == 1:
        assert prof.total == n


@pytest.mark.parametrize("k", range(2, 21))
def test_constructed_graphs_have_diameter_k(k):
    g = generator_set(k)
    c = build_circulant(g.n, g.s)
    prof = distance_profile(c)
    assert prof.total == g.n
    assert prof.histogram[1] == 8
    assert prof.diameter == k


@pytest.mark.parametrize("k", [2, 3, 4])
def test_vertex_transitivity_small(k):
    g = generator_set(k)
    assert all_pairs_diameter(g.n, g.s) == diameter(build_circulant(g.n, g.s))


def test_cvp_examples():
    s = build_system(4)
    assert cvp_oracle(ZERO, s) == (0, ZERO)
    v = s.vec(1) + s.vec(2)
    assert cvp_oracle(v, s) == (0, v)
    d, w = cvp_oracle((3, 3, 3, 3), s)
    assert d <= 4
    assert project(w, s) == 0
    assert d == brute_cvp((3, 3, 3, 3), s.basis, 3)


@given(st.sampled_from([4, 5, 6, 7]), st.data())
def test_cvp_matches_brute_force(k, data):
    s = build_system(k)
    c = s.a + 2
    x = data.draw(st.tuples(*[st.integers(-c, c)] * 4))
    d, w = cvp_oracle(x, s, window=2)
    assert d == brute_cvp(x, s.basis, 2)
    assert sum(abs(a - b) for a, b in zip(x, w)) == d


@pytest.mark.parametrize("k", [4, 5, 6, 7])
def test_cvp_window_monotone_and_reduce_agrees(k):
    s = build_system(k)
    c = s.a + 2
    xs = np.array(list(itertools.product(range(-c, c + 1), repeat=4)))
    d3, _ = cvp_distances(xs, s, 3)
    d4, _ = cvp_distances(xs, s, 4)
    assert (d3 == d4).all()
    assert d3.max() <= k
    g = generator_set(k)
    dist = bfs_distances(build_circulant(g.n, g.s))
    for x, d in zip(xs, d3):
        cert = reduce(tuple(int(t) for t in x), s)
        assert d <= cert.word_length <= k
        assert dist[project(x, g)] <= cert.word_length


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_verify_covering(k):
    rep = verify_covering(k)
    assert rep.ok, rep.failures[:3]
    assert rep.bfs_diameter == k
    assert rep.max_word_length <= k
    assert rep.method == ("bfs" if k < 4 else "reduce+bfs")
    assert "status=pass" in rep.to_kv()


@pytest.mark.parametrize("k,side", [(4, 7), (5, 9), (6, 9)])
def test_case_coverage(k, side):
    rep = verify_case_coverage(k)
    assert rep.points == side**4
    assert rep.ok
    assert rep.no_matching_case == rep.anchor_violations == 0
    assert rep.max_word_length <= k
    assert rep.between + rep.dispatched == rep.points
    assert sum(rep.pipeline_hits.values()) == rep.dispatched


def test_case_coverage_rejects_base_case():
    with pytest.raises(ValueError):
        verify_case_coverage(3)
