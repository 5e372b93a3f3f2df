import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dongcheck.core import GenSymbol, LinComb, gen
from dongcheck.syntax import parse_lincomb
from dongcheck.varieties import (
    ASSOCIATIVE,
    LEIBNIZ,
    NOVIKOV,
    PRE_ASSOCIATIVE,
    RIGHT_SYMMETRIC,
    VARIETIES,
    DegreeOverflowError,
    SignatureMismatchError,
    check_identity,
    engine,
    free_dimension,
    fresh_generators,
    irreducible_monomials,
    is_multilinear,
    magmatic_words,
    preassoc_basis_monomials,
)


@pytest.mark.parametrize(
    "variety, text",
    [
        (PRE_ASSOCIATIVE, "((a(1) * a(2)) . a(3)) - (a(1) . (a(2) . a(3)))"),
        (RIGHT_SYMMETRIC,
         "((a(1) o a(2)) o a(3)) - (a(1) o (a(2) o a(3))) - ((a(1) o a(3)) o a(2)) + (a(1) o (a(3) o a(2)))"),
        (LEIBNIZ, "[[a(1),a(2)],a(3)] - [a(1),[a(2),a(3)]] + [a(2),[a(1),a(3)]]"),
    ],
)
def test_defining_relations_reduce_to_zero(variety, text):
    assert engine(variety).normal_form(parse_lincomb(text)).is_zero()


def test_every_identity_of_every_variety():
    for v in VARIETIES.values():
        for ident in v.identities:
            assert check_identity(v, ident.template, ident.arity), (v.name, ident.name)


def test_check_identity_examples():
    assert check_identity(NOVIKOV, "(x o (y o z)) - (y o (x o z))")
    assert not check_identity(ASSOCIATIVE, "((x * y) * z) - (x * (z * y))")
    assert check_identity(PRE_ASSOCIATIVE, "(x . (y * z)) - ((x . y) * z) - (x . (y . z)) + ((x . y) . z)")
    # left commutativity is not a right-symmetric identity
    assert not check_identity(RIGHT_SYMMETRIC, "(x o (y o z)) - (y o (x o z))")


def test_degree_overflow():
    with pytest.raises(DegreeOverflowError, match="degree overflow"):
        engine(PRE_ASSOCIATIVE).normal_form(parse_lincomb("(((a(1) . a(2)) . a(3)) . a(4))"))


def test_signature_mismatch():
    with pytest.raises(SignatureMismatchError, match="signature mismatch"):
        engine(PRE_ASSOCIATIVE).normal_form(parse_lincomb("(a(1) o a(2))"))


def test_preassoc_basis_enumeration():
    a1, a2 = gen(1), gen(2)
    deg2 = preassoc_basis_monomials([a1, a2], 2)
    assert len(deg2) == 8
    assert {t.op for t in deg2} == {"star", "succ"}
    # one generator, degree 3: two words per split 1+2 and 2+1, one pure star chain
    assert len(preassoc_basis_monomials([GenSymbol("a")], 3)) == 5
    assert preassoc_basis_monomials([a1, a2], 1) == [a1, a2]


def test_preassoc_basis_is_the_irreducible_set():
    gens = fresh_generators(2)
    for d in (2, 3):
        assert sorted(map(str, preassoc_basis_monomials(gens, d))) == sorted(
            map(str, irreducible_monomials(PRE_ASSOCIATIVE, gens, d)))


# known multilinear dimensions in degree 3: n! for associative and Leibniz,
# (n-1)! for Lie, n^(n-1) rooted trees for pre-Lie, C(2n-2, n-1) for Novikov,
# n! times the Catalan number for dendriform
@pytest.mark.parametrize("name, expected",
                         [("assoc", 6), ("lie", 2), ("rsym", 9), ("novikov", 6),
                          ("preassoc", 30), ("leibniz", 6)])
def test_multilinear_dimensions(name, expected):
    v = VARIETIES[name]
    gens = fresh_generators(3)
    assert free_dimension(v, gens, 3, select=is_multilinear) == expected
    assert len(irreducible_monomials(v, gens, 3, select=is_multilinear)) == expected


@pytest.mark.parametrize("name", list(VARIETIES))
def test_normal_form_count_matches_rank_on_two_generators(name):
    v = VARIETIES[name]
    gens = fresh_generators(2)
    for d in (2, 3):
        assert len(irreducible_monomials(v, gens, d)) == free_dimension(v, gens, d)


def _random_element(variety, draw_terms):
    words = magmatic_words(fresh_generators(2), 3, variety.signature)
    return LinComb({words[i % len(words)]: c for i, c in draw_terms})


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(VARIETIES)),
       st.lists(st.tuples(st.integers(0, 200), st.integers(-3, 3)), max_size=5),
       st.lists(st.tuples(st.integers(0, 200), st.integers(-3, 3)), max_size=5))
def test_normal_form_is_linear_and_idempotent(name, xs, ys):
    v = VARIETIES[name]
    nf = engine(v).normal_form
    x, y = _random_element(v, xs), _random_element(v, ys)
    assert nf(nf(x)) == nf(x)
    assert nf(x + 2 * y) == nf(x) + 2 * nf(y)


def test_normal_forms_are_irreducible():
    for v in VARIETIES.values():
        eng = engine(v)
        for w in magmatic_words(fresh_generators(2), 3, v.signature):
            for t in eng.normal_form(w).terms():
                assert eng.is_normal(t)


def test_lie_words_are_right_nested_for_leibniz():
    eng = engine(LEIBNIZ)
    for w in magmatic_words(fresh_generators(3), 3, ("bracket",)):
        for t in eng.normal_form(w).terms():
            assert not hasattr(t.left, "op")


def test_multilinear_selector():
    g = fresh_generators(3)
    for w in magmatic_words(g, 3, ("circ",)):
        leaves = str(w).count("g(")
        assert leaves == 3
    assert sum(is_multilinear(w) for w in magmatic_words(g, 3, ("circ",))) == 12
    assert len(list(itertools.permutations(g))) * 2 == 12
