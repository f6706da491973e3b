from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from cohconf.budget import Budget, BudgetExceeded
from cohconf.builders import c_scheme, compose, cyclotomic_scheme, discrete_configuration, inverse, paley, trivial_scheme
from cohconf.closure import point_extension
from cohconf.core import from_color_matrix
from cohconf.gf import build_field, prime_power
from cohconf.iso import (
    AlgebraicMap,
    algebraic_automorphisms,
    algebraic_isomorphisms,
    automorphism_group,
    brute_force_automorphisms,
    find_isomorphism,
    induced_map,
    is_schurian,
    isomorphisms,
    separability_witness,
    tensor_fingerprint,
)

from conftest import corpus_where


def relabelled(X, seed=0):
    perm = np.random.default_rng(seed).permutation(X.n)
    return from_color_matrix(X.colors[np.ix_(perm, perm)]), perm


def test_aut_examples():
    assert automorphism_group(trivial_scheme(4)).order == 24
    assert automorphism_group(paley(5).scheme).order == 10
    assert automorphism_group(c_scheme(build_field(2, 3))).order == 21


def test_isomorphism_examples():
    D1 = discrete_configuration(1)
    assert isomorphisms(D1, D1) == [(0,)]
    P5 = paley(5).scheme
    maps = isomorphisms(P5, P5)
    assert len(maps) == 20 == isomorphisms(P5, P5, count_only=True)
    assert len(set(maps)) == 20
    C = P5.colors
    swapped = 0
    for f in maps:
        fa = np.asarray(f)
        phi = induced_map(P5, P5, f)
        assert np.array_equal(np.asarray(phi)[C], C[np.ix_(fa, fa)])
        assert AlgebraicMap(P5, P5, phi).is_valid()
        swapped += phi != tuple(range(P5.rank))
    assert swapped == 10
    assert isomorphisms(P5, trivial_scheme(5)) == []


def test_isomorphisms_are_isomorphisms():
    X = paley(9).scheme
    Y, perm = relabelled(X, 4)
    for f in isomorphisms(X, Y):
        phi = induced_map(X, Y, f)
        fa = np.asarray(f)
        # r(a, b) in X maps to r(f(a), f(b)) in Y
        assert np.array_equal(np.asarray(phi)[X.colors], Y.colors[np.ix_(fa, fa)])


def test_algebraic_examples():
    assert len(algebraic_isomorphisms(trivial_scheme(6), trivial_scheme(6))) == 1
    assert len(algebraic_automorphisms(paley(13).scheme)) == 2
    assert algebraic_isomorphisms(paley(13).scheme, trivial_scheme(13)) == []


def test_find_isomorphism_on_relabelled_copy():
    for X in (paley(13).scheme, c_scheme(build_field(2, 4)), cyclotomic_scheme(build_field(19, 1), 3)):
        Y, _ = relabelled(X, 1)
        f = find_isomorphism(X, Y)
        assert f is not None
        fa = np.asarray(f)
        phi = np.asarray(induced_map(X, Y, f))
        assert np.array_equal(phi[X.colors], Y.colors[np.ix_(fa, fa)])
    assert find_isomorphism(paley(13).scheme, trivial_scheme(13)) is None


@pytest.mark.parametrize("pd,expect", [((2, 2), True), ((2, 3), True), ((5, 2), True)])
def test_witness_examples(pd, expect):
    w = separability_witness(c_scheme(build_field(*pd)))
    assert w.holds is expect
    assert w.iso_count // w.aut_order == w.aiso_count


def test_schurian_examples():
    for n in (1, 3, 5):
        assert is_schurian(discrete_configuration(n))
    for q in (5, 7, 8, 9, 11, 13, 16, 25, 27):
        F = build_field(*prime_power(q))
        for index in (i for i in range(1, q) if (q - 1) % i == 0):
            X = cyclotomic_scheme(F, index)
            assert is_schurian(point_extension(X, 0)), (q, index)


SMALL = corpus_where(lambda X: X.n <= 7)


@pytest.mark.parametrize("name,X", SMALL, ids=[n for n, _ in SMALL])
def test_aut_matches_brute_force(name, X):
    G = automorphism_group(X)
    brute = brute_force_automorphisms(X)
    assert G.order == len(brute)
    assert sorted(G.elements()) == sorted(brute)


def test_group_axioms(corpus):
    for name, X in corpus:
        if X.n > 13:
            continue
        G = automorphism_group(X)
        assert math.factorial(X.n) % G.order == 0, name
        if G.order > 2000:
            continue
        elems = set(G.elements())
        C = X.colors
        for g in list(elems)[:30]:
            ga = np.asarray(g)
            assert np.array_equal(C[np.ix_(ga, ga)], C), name
            assert inverse(g) in elems
            for h in list(elems)[:30]:
                assert compose(g, h) in elems


def test_algebraic_maps_respect_products(corpus):
    """phi(r*) = phi(r)*, phi(rs) = phi(r)phi(s), phi(rs & uv) = phi(rs) & phi(uv)."""
    for name, X in corpus:
        if X.rank > 12 or X.n > 16:
            continue
        cv = X.converse
        for phi in algebraic_automorphisms(X)[:50]:
            assert phi.is_valid()
            for r in range(X.rank):
                assert phi(cv[r]) == cv[phi(r)], name
            for r, s in itertools.product(range(X.rank), repeat=2):
                assert phi.image(X.product(r, s)) == X.product(phi(r), phi(s)), name
            for r, s, u, v in itertools.product(range(X.rank), repeat=4):
                both = X.product(r, s) & X.product(u, v)
                assert phi.image(both) == phi.image(X.product(r, s)) & phi.image(X.product(u, v)), name


def test_induced_maps_are_algebraic(corpus):
    for name, X in corpus:
        if X.n > 10 or X.rank > 30 or automorphism_group(X).order > 5000:
            continue
        for f in isomorphisms(X, X)[:100]:
            assert AlgebraicMap(X, X, induced_map(X, X, f)).is_valid(), name


def test_fingerprint_is_invariant():
    X = paley(13).scheme
    Y, _ = relabelled(X, 7)
    assert tensor_fingerprint(X) == tensor_fingerprint(Y)
    assert tensor_fingerprint(X) != tensor_fingerprint(trivial_scheme(13))


def test_budgets():
    with pytest.raises(BudgetExceeded):
        automorphism_group(trivial_scheme(30), Budget(search_points=10))
    with pytest.raises(BudgetExceeded):
        algebraic_isomorphisms(discrete_configuration(6), discrete_configuration(6), Budget(aiso_rank=10))
