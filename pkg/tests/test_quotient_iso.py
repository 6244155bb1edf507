import dataclasses

import pytest
from hypothesis import given
from hypothesis import strategies as st

from circulant8.lattice_core import Vec4, build_system, combine, order_formula
from circulant8.quotient_iso import (
    GeneratorSet,
    combo_identities,
    generator_set,
    project,
    verify_cyclic,
)

from oracles import solve_coefficients


@pytest.mark.parametrize(
    "k,n,gens",
    [(2, 32, (1, 15, 4, 6)), (3, 104, (1, 27, 16, 20)), (4, 248, (1, 61, 72, 76)), (5, 528, (1, 89, 156, 162))],
)
def test_generator_sets(k, n, gens):
    g = generator_set(k)
    assert g.n == n
    assert g.s == gens


def test_small_instances_as_sets():
    assert set(generator_set(2).s) == {1, 4, 6, 15}
    assert set(generator_set(3).s) == {1, 16, 20, 27}


def test_generator_formulas_divide_exactly():
    for k in range(2, 1001):
        g = generator_set(k)
        assert all(0 < s < g.n for s in g.s)


@pytest.mark.parametrize("bad", [(2, 5, 6, 7), (1, 16, 5, 6), (1, 5, 27, 6), (1, 5, 5, 6), (1, 0, 5, 6)])
def test_generator_set_validation(bad):
    with pytest.raises(ValueError):
        GeneratorSet(32, bad)


def test_combo_example_even_k4():
    ident = combo_identities(build_system(4))[0]
    assert ident.coefficients == (-13, 12, -4, 1)
    assert ident.actual == ident.expected == Vec4(61, -1, 0, 0)


def test_combo_example_odd_k3():
    ident = combo_identities(build_system(3))[0]
    assert ident.coefficients == (-4, 5, -2, -1)
    assert ident.actual == Vec4(27, -1, 0, 0)
    # the other candidate coefficient vector does not give this point
    assert combine((-12, 13, -2, -1), build_system(3).basis) != Vec4(27, -1, 0, 0)


@pytest.mark.parametrize("k", range(2, 51))
def test_combos_hold_and_match_generators(k):
    s = build_system(k)
    g = generator_set(k)
    for ident, gen in zip(combo_identities(s), g.s[1:]):
        assert ident.holds, ident
        assert ident.constant % g.n == gen
        # coefficients agree with an exact rational solve
        assert [int(c) for c in solve_coefficients(ident.expected, s.basis)] == list(ident.coefficients)
        assert project(ident.expected, g) == 0


@pytest.mark.parametrize("k", range(2, 51))
def test_lattice_vectors_project_to_zero(k):
    s = build_system(k)
    assert all(project(v, s) == 0 for v in s.vectors)


def test_project_examples():
    assert project((1, 0, 0, 0), build_system(4)) == 1
    assert project(build_system(4).basis[0], build_system(4)) == 0
    assert project((1, 1, 0, 0), build_system(2)) == 16


@pytest.mark.parametrize("k", [2, 3, 5, 10, 50])
def test_verify_cyclic(k):
    rep = verify_cyclic(build_system(k))
    assert rep.is_cyclic and rep.order == order_formula(k) and not rep.failures


def test_verify_cyclic_k5_order():
    assert verify_cyclic(build_system(5)).order == 528


def test_perturbed_basis_not_cyclic():
    s = build_system(4)
    bad = dataclasses.replace(s, basis=(s.basis[0] + Vec4(1, 0, 0, 0),) + s.basis[1:])
    rep = verify_cyclic(bad)
    assert not rep.is_cyclic
    assert any("determinant" in f for f in rep.failures)


small = st.integers(-10**6, 10**6)
vec = st.tuples(small, small, small, small)


@given(st.integers(2, 60), vec, vec)
def test_project_is_homomorphism(k, x, y):
    g = generator_set(k)
    s = tuple(a + b for a, b in zip(x, y))
    assert project(s, g) == (project(x, g) + project(y, g)) % g.n


@given(st.integers(2, 60), st.lists(st.integers(-4, 4), min_size=4, max_size=4), vec)
def test_lattice_shift_is_invisible(k, c, x):
    s = build_system(k)
    w = combine(c, s.basis)
    shifted = tuple(a + b for a, b in zip(x, w))
    assert project(shifted, s) == project(x, s)
