from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetalab import cmzv, words
from zetalab.compositions import Composition, all_compositions
from zetalab.words import GaussQ, LinComb

I = GaussQ(0, 1)
stuffle_words = st.lists(st.tuples(st.integers(1, 3), st.sampled_from((1, -1))),
                         max_size=3).map(tuple)
form_words = st.lists(st.sampled_from(("0", "1", "-1", "i", "-i")), max_size=4).map(tuple)


def test_stuffle_examples():
    assert words.stuffle((1,), (1,)) == LinComb({((1, 1), (1, 1)): 2, ((2, 1),): 1})
    assert words.stuffle((2,), (2,)) == LinComb({((2, 1), (2, 1)): 2, ((4, 1),): 1})
    # collisions multiply signs
    assert words.stuffle(((1, -1),), ((2, -1),))[((3, 1),)] == 1


@pytest.mark.parametrize("m", range(7))
def test_word_lemma(m):
    lhs, rhs = words.hoffman_word_lemma_sides(m)
    assert lhs == rhs


@given(stuffle_words, stuffle_words)
def test_stuffle_commutative(u, v):
    assert words.stuffle(u, v) == words.stuffle(v, u)


@given(stuffle_words, stuffle_words, stuffle_words)
def test_stuffle_associative(u, v, w):
    one = LinComb.single(())
    left = words.stuffle_lincomb(words.stuffle(u, v), LinComb.single(w))
    right = words.stuffle_lincomb(LinComb.single(u), words.stuffle(v, w))
    assert left == right
    assert words.stuffle_lincomb(LinComb.single(u), one) == LinComb.single(u)


@given(form_words, form_words)
def test_shuffle_commutative_and_counts(u, v):
    s = words.shuffle(u, v)
    assert s == words.shuffle(v, u)
    from math import comb
    assert sum(s.values()) == comb(len(u) + len(v), len(u))


@given(form_words, form_words, st.lists(st.sampled_from(("0", "1")), max_size=2).map(tuple))
def test_shuffle_associative_unital(u, v, w):
    left = words.shuffle(words.shuffle(u, v), LinComb.single(w))
    right = words.shuffle(LinComb.single(u), words.shuffle(v, w))
    assert left == right
    assert words.shuffle(u, ()) == LinComb.single(u)


def test_shuffle_examples():
    assert words.shuffle(("1",), ("0",)) == LinComb({("1", "0"): 1, ("0", "1"): 1})
    # Li_{2,2}(t) Li_1(t) = 2 Li_{2,2,1} + 2 Li_{2,1,2} + Li_{1,2,2}
    prod = words.shuffle(("1", "0", "1", "0"), ("1",))
    assert prod == LinComb({("1", "1", "0", "1", "0"): 2, ("1", "0", "1", "1", "0"): 2,
                            ("1", "0", "1", "0", "1"): 1})


def test_li22_log_numeric():
    h = Fraction(1, 2)
    lhs = cmzv.li((2, 2), (h, 1)) * -cmzv.li((1,), (h,))
    rhs = (cmzv.li((2, 2, 1), (h, 1, 1)) * -2 - cmzv.li((2, 1, 2), (h, 1, 1)) * 2
           - cmzv.li((1, 2, 2), (h, 1, 1)))
    assert abs(complex(lhs - rhs)) < 1e-28


def test_star_expand_examples():
    c = Composition((1, 1))
    assert words.star_expand(c, "star_in_nonstar") == LinComb({c: 1, Composition((2,)): 1})
    assert words.star_expand(c, "nonstar_in_star") == LinComb({c: 1, Composition((2,)): -1})


def test_star_roundtrip_to_weight_8():
    for c in all_compositions(8):
        assert words.star_roundtrip(c) == LinComb.single(c)


def test_regularize_admissible_is_constant():
    assert words.shuffle_regularize(("1", "0")) == {0: LinComb.single(("1", "0"))}
    assert words.shuffle_regularize(("0",)) == {1: LinComb.single(())}


@pytest.mark.parametrize("w", [("0", "1", "0"), ("1", "0", "1"), ("0", "i", "1"), ("0", "0", "1", "1"),
                               ("1", "0", "0", "1", "-1")])
def test_regularize_shuffles_back(w):
    poly = words.shuffle_regularize(w, split=True)
    for lc in poly.values():
        for key in lc:
            assert not key or (key[0] != "0" and key[-1] != "1")
    assert words.unregularize(poly) == LinComb.single(w)


def test_t3_substitution_examples():
    y = words.substitute(("0",), "T3")
    assert y == LinComb({("-i",): 1, ("i",): 1, ("-1",): -1, ("1",): -1})
    assert words.substitute(("dt/sqrt(1-t^2)",), "T3") == LinComb({("-i",): I, ("i",): -I})
    assert words.substitute(("dt/(t*sqrt(1-t^2))",), "T3") == LinComb({("-1",): 1, ("1",): -1})


def test_substitution_rejects_unknown_letter():
    with pytest.raises((KeyError, ValueError)):
        words.substitute(("dt/(2-t)",), "T3")


def test_composite_tables_validate():
    cmzv.validate_composite_tables()
