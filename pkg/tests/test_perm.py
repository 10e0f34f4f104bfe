from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from digraphsearch.experiments import make_grid_group
from digraphsearch.oracle import group_elements
from digraphsearch.perm import (
    Permutation, PermGroup, compose, contains, format_perm, inverse, orbits, parse_perm,
    representative_action, schreier_sims,
)


def P(n, s):
    return parse_perm(n, s)


def perms(n):
    return st.permutations(list(range(n))).map(Permutation)


def test_compose_worked_example():
    assert str(compose(P(5, "(1 4)"), P(5, "(1 5)(2 3)"))) == "(1,4,5)(2,3)"


def test_identity_and_inverse_basics():
    p = P(4, "(1,2,3)")
    assert compose(Permutation.identity(4), p) == p
    assert str(inverse(p)) == "(1,3,2)"
    assert inverse(Permutation.identity(3)).is_identity()
    assert str(Permutation.identity(3)) == "()"


@given(perms(10))
def test_times_inverse_is_identity(p):
    assert (p * p.inverse()).is_identity()
    assert p.inverse().inverse() == p


@given(perms(6), perms(6), perms(6))
def test_associativity_and_action(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * Permutation.identity(6) == p
    for x in range(6):
        assert (p * q)[x] == q[p[x]]


@given(perms(7))
def test_cycle_string_round_trip(p):
    assert parse_perm(7, format_perm(p)) == p
    assert parse_perm(7, str(p).replace(",", " ")) == p


def test_parse_rejects_bad_input():
    with pytest.raises(ValueError):
        P(3, "(1,4)")
    with pytest.raises(ValueError):
        P(3, "(1,2)(2,3)")


def test_orbit_examples():
    assert orbits(PermGroup(4, [P(4, "(1,2)")])) == [[0, 1], [2], [3]]
    klein = PermGroup(4, [P(4, "(1,2)(3,4)"), P(4, "(1,3)(2,4)")])
    assert orbits(klein) == [[0, 1, 2, 3]]
    assert orbits(make_grid_group(3)) == [list(range(9))]


def test_chain_orders():
    assert PermGroup(4, [P(4, "(1,2)"), P(4, "(1,2,3,4)")]).order() == 24
    assert PermGroup(4, [P(4, "(1,2)(3,4)"), P(4, "(1,3)(2,4)")]).order() == 4
    grid = make_grid_group(3)
    assert grid.order() == 36
    assert len(group_elements(9, [str(g) for g in grid.generators])) == 36


def test_membership_examples():
    assert contains(PermGroup.symmetric(4), P(4, "(1,2)"))
    assert not contains(PermGroup(3, [P(3, "(1,2,3)")]), P(3, "(1,2)"))
    with pytest.raises(ValueError):
        PermGroup.symmetric(4).contains(P(3, "(1,2)"))


def test_representative_action_examples():
    G = PermGroup(6, [P(6, "(1,2)"), P(6, "(3,4)"), P(6, "(5,6)"), P(6, "(1,3,5)(2,4,6)")])
    assert representative_action(G, [], []).is_identity()
    g = representative_action(G, [0, 1], [2, 3])
    assert g is not None and G.contains(g) and (g[0], g[1]) == (2, 3)
    assert representative_action(PermGroup(4, [P(4, "(3,4)")]), [0], [1]) is None
    with pytest.raises(ValueError):
        representative_action(G, [0], [])


def _random_group(seed, n, k=2):
    rng = np.random.default_rng(seed)
    return PermGroup(n, [Permutation(rng.permutation(n).tolist()) for _ in range(k)])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 7), st.integers(1, 3))
def test_order_matches_closure(seed, n, k):
    G = _random_group(seed, n, k)
    assert G.order() == len(group_elements(n, [str(g) for g in G.generators]))
    ch = G.chain()
    for g in G.generators:
        residue, _ = ch.sift(g.images)
        assert residue == tuple(range(n))


def test_membership_matches_enumeration_in_s6():
    for seed in range(50):
        G = _random_group(seed, 6, 1 + seed % 2)
        elems = group_elements(6, [str(g) for g in G.generators])
        for p in permutations(range(6)):
            assert G.contains(Permutation(p)) == (p in elems)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 7), st.data())
def test_representative_action_is_correct(seed, n, data):
    G = _random_group(seed, n)
    m = data.draw(st.integers(0, n))
    src = data.draw(st.permutations(list(range(n))))[:m]
    dst = data.draw(st.permutations(list(range(n))))[:m]
    g = G.representative_action(src, dst)
    exists = any(all(x[a] == b for a, b in zip(src, dst)) for x in group_elements(n, [str(h) for h in G.generators]))
    assert (g is not None) == exists
    if g is not None:
        assert G.contains(g) and all(g[a] == b for a, b in zip(src, dst))
        assert G.representative_action(src, dst) == g


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 7))
def test_orbits_ignore_generator_order(seed, n):
    G = _random_group(seed, n, 3)
    H = PermGroup(n, list(reversed(G.generators)))
    assert G.orbits() == H.orbits()
    assert schreier_sims(n, G.generators, (n - 1,)).order() == G.order()


def test_random_elements_are_members_and_reproducible():
    G = make_grid_group(4)
    a = [G.random_element(np.random.default_rng(5)) for _ in range(3)]
    b = [G.random_element(np.random.default_rng(5)) for _ in range(3)]
    assert a == b and all(G.contains(x) for x in a)


def test_pointwise_stabiliser_order():
    G = PermGroup.symmetric(5)
    assert G.pointwise_stabiliser([0, 3]).order() == 6
