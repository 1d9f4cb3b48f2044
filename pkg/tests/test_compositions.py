from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetalab.compositions import (ROOTS, Composition, CompositionSyntaxError, TwistedComposition,
                                  all_compositions, format_composition, hoffman_dual,
                                  is_admissible, parse, slice, weight, depth)

comps = st.lists(st.integers(1, 5), min_size=1, max_size=6).map(lambda p: Composition(tuple(p)))


def test_parse_examples():
    tc = parse("2~,1")
    assert tc.parts == (2, 1) and tc.twists == (-1, 1)
    assert parse("").parts == () and parse("").twists == ()
    assert parse("2,1^3").parts == (2, 1, 1, 1)
    assert parse("2@-1") == parse("2~")
    assert parse("3@i,1@-i").twists == (1j, -1j)


@pytest.mark.parametrize("bad", ["0", "-2", "2,,1", "2@j", "2^0x", "a"])
def test_parse_rejects(bad):
    with pytest.raises(CompositionSyntaxError):
        parse(bad)


def test_parse_error_has_offset():
    with pytest.raises(CompositionSyntaxError) as exc:
        parse("2,1,x")
    assert "4" in str(exc.value)


def test_format_roundtrip_all_twists():
    for c in all_compositions(5):
        for tw in product(ROOTS, repeat=c.depth):
            tc = TwistedComposition(c.parts, tw)
            assert parse(format_composition(tc)) == tc


def test_dual_examples():
    assert hoffman_dual(Composition((1, 1, 2, 1))).parts == (3, 2)
    assert hoffman_dual(Composition((1, 2, 1, 1))).parts == (2, 3)
    assert hoffman_dual(Composition((1,))).parts == (1,)
    with pytest.raises(ValueError):
        hoffman_dual(Composition(()))


def test_dual_rejects_twisted():
    with pytest.raises(ValueError):
        hoffman_dual(parse("2~,1"))


def test_dual_exhaustive_to_weight_12():
    for c in all_compositions(12):
        d = hoffman_dual(c)
        assert hoffman_dual(d) == c
        assert d.weight == c.weight
        assert c.depth + d.depth == c.weight + 1


@given(comps)
def test_dual_property(c):
    assert hoffman_dual(hoffman_dual(c)) == c


def test_weight_depth_admissible():
    assert weight(Composition((2, 3, 1, 4))) == 10
    assert depth(Composition(())) == 0
    assert not is_admissible(Composition((1, 2)), "MZV")
    assert is_admissible(Composition((2, 1)), "MZV")
    assert is_admissible(parse("1~,2"), "MZV")


def test_slice():
    assert slice(Composition((5, 4, 3, 2)), 2, 3, "fwd").parts == (4, 3)
    assert slice(Composition((5, 4, 3, 2)), 3, 2, "fwd").parts == ()
    assert slice(Composition((5, 4, 3)), 1, 3, "rev").parts == (3, 4, 5)
    with pytest.raises(ValueError):
        slice(Composition((5, 4)), 1, 3)


def test_level():
    assert parse("2,1").level == 1
    assert parse("2~,1").level == 2
    assert parse("2@i,1").level == 4
