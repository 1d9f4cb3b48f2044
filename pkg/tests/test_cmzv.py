from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetalab import cmzv, words
from zetalab.compositions import TwistedComposition, parse
from zetalab.xprec import XReal

mpmath.mp.dps = 40
TOL = 1e-20


def re(v):
    return mpmath.mpf(float(v.re.hi)) + mpmath.mpf(float(v.re.lo))


def cx(v):
    im = mpmath.mpf(float(v.im.hi)) + mpmath.mpf(float(v.im.lo))
    return re(v) + 1j * im


def near(v, want, tol=TOL):
    return abs(cx(v) - want) < tol


def test_depth_one_values():
    assert near(cmzv.cmzv(parse("2")), mpmath.zeta(2))
    assert near(cmzv.cmzv(parse("3")), mpmath.zeta(3))
    assert abs(mpmath.mpf(float(cmzv.zeta_alt_depth1(1))) + mpmath.log(2)) < 1e-15
    assert abs(re(cmzv.cmzv(parse("2~"))) + mpmath.pi ** 2 / 12) < TOL
    assert near(cmzv.cmzv(parse("2@i")), mpmath.polylog(2, 1j))


@pytest.mark.parametrize("k", range(2, 7))
def test_alternating_depth_one(k):
    want = (mpmath.mpf(2) ** (1 - k) - 1) * mpmath.zeta(k)
    assert abs(re(cmzv.cmzv(TwistedComposition((k,), (-1,)))) - want) < TOL


def test_words_and_admissibility():
    assert near(cmzv.iterint(("1", "0")), mpmath.zeta(2))
    assert not cmzv.is_word_admissible(("1",))
    with pytest.raises(ValueError):
        cmzv.iterint(("1",))
    with pytest.raises(cmzv.DivergenceError):
        cmzv.cmzv(parse("1,2"))


def test_polylog_values():
    half = mpmath.mpf(1) / 2
    want = mpmath.pi ** 2 / 12 - mpmath.log(2) ** 2 / 2
    assert near(cmzv.li((2,), (Fraction(1, 2),)), want)
    assert near(cmzv.li((3,), (Fraction(1, 2),)), mpmath.polylog(3, half))
    # sum_{n>m} x^n / (n m) = log(1-x)^2 / 2
    assert near(cmzv.li((1, 1), (-1, 1)), mpmath.log(2) ** 2 / 2)
    assert near(cmzv.li((1, 1), ("i", 1)), mpmath.log(1 - 1j) ** 2 / 2)
    # Li_{1,1}(-i, i): the inner argument product is 1 and the pair reduces to depth one
    brute = mpmath.nsum(lambda n: (-1j) ** n / n * mpmath.nsum(lambda m: 1j ** m / m, [1, n - 1])
                        if n > 1 else 0, [1, 400])
    v = cmzv.li((1, 1), ("-i", "i"))
    assert abs(cx(v) - brute) < 5e-3


def test_mtv_values():
    assert near(cmzv.mtv(parse("2")), mpmath.pi ** 2 / 8)
    assert abs(re(cmzv.mtv(parse("2~"))) + mpmath.catalan) < TOL
    assert abs(re(cmzv.mtv(parse("1~"))) + mpmath.pi / 4) < TOL
    assert near(cmzv.mtv(parse("3"), expand=True), mpmath.zeta(3) * 7 / 8)
    assert near(cmzv.mtv(parse("2,1~")), cx(cmzv.mtv(parse("2,1~"), expand=True)))


@pytest.mark.parametrize("k", [2, 3, 4])
def test_rvalue_depth_one(k):
    assert abs(mpmath.mpf(float(cmzv.rvalue((k,)))) - (2 ** k - 1) * mpmath.zeta(k)) < 1e-14


def test_rvalue_depth_two():
    # R(2,1) = 4 sum_n H_{n-1}/(2n-1)^2 with H_{n-1} = int_0^1 (1 - x^{n-1})/(1 - x) dx
    def chi2(y):
        return (mpmath.polylog(2, y) - mpmath.polylog(2, -y)) / 2

    def f(x):
        return (mpmath.pi ** 2 / 8 - chi2(mpmath.sqrt(x)) / mpmath.sqrt(x)) / (1 - x)
    want = 4 * mpmath.quad(f, [0, 1])
    assert abs(mpmath.mpf(float(cmzv.rvalue((2, 1)))) - want) < 1e-14


def test_mmv():
    assert abs(mpmath.mpf(float(cmzv.mmv((2,), (1,)))) - mpmath.zeta(2) / 2) < 1e-15
    assert abs(mpmath.mpf(float(cmzv.mmv((2,), (-1,)))) - 3 * mpmath.zeta(2) / 2) < 1e-15
    with pytest.raises(ValueError):
        cmzv.mmv((2,), (2,))


def test_accel_alternating():
    s = cmzv.accel_alternating(lambda k: XReal.from_fraction(Fraction(1, k + 1)))
    assert abs(mpmath.mpf(float(s.hi)) + mpmath.mpf(float(s.lo)) - mpmath.log(2)) < 1e-28
    s = cmzv.accel_alternating(lambda k: XReal.from_fraction(Fraction(1, 2 * k + 1)))
    assert abs(mpmath.mpf(float(s.hi)) + mpmath.mpf(float(s.lo)) - mpmath.pi / 4) < 1e-28
    s = cmzv.accel_alternating(lambda k: XReal.from_fraction(Fraction(1, (2 * k + 1) ** 2)))
    assert abs(mpmath.mpf(float(s.hi)) + mpmath.mpf(float(s.lo)) - mpmath.catalan) < 1e-28


def test_composite_tables():
    cmzv.validate_composite_tables()


_ROOTS = ["1", "-1", "i", "-i"]


@settings(max_examples=15)
@given(st.lists(st.sampled_from(_ROOTS + ["0"]), min_size=1, max_size=2),
       st.lists(st.sampled_from(_ROOTS + ["0"]), min_size=1, max_size=2))
def test_shuffle_homomorphism(u, v):
    u, v = tuple(u), tuple(v)
    if not (cmzv.is_word_admissible(u) and cmzv.is_word_admissible(v)):
        return
    prod = cmzv.iterint(u) * cmzv.iterint(v)
    total = None
    for w, c in words.shuffle(u, v).items():
        term = cmzv.iterint(w) * c
        total = term if total is None else total + term
    assert abs(cx(prod) - cx(total)) < 1e-22


@pytest.mark.parametrize("text", ["2@i", "1@i,1", "2@-i,1~", "3@i"])
def test_conjugation_symmetry(text):
    tc = parse(text)
    a, b = cmzv.cmzv(tc), cmzv.cmzv(tc.conjugate())
    assert abs(cx(a) - mpmath.conj(cx(b))) < 1e-25


@pytest.mark.parametrize("w", [("1", "0"), ("-1", "0", "0"), ("i", "1", "0"), ("-i", "-1")])
def test_split_invariance(w):
    a = cmzv.iterint(w, split=[Fraction(1, 2)])
    b = cmzv.iterint(w, split=[Fraction(1, 3), Fraction(2, 3)])
    assert abs(cx(a) - cx(b)) < 1e-25


def test_error_estimate():
    v, err = cmzv.iterint_with_error(("1", "0", "0"))
    assert abs(cx(v) - mpmath.zeta(3)) < 1e-25 and err < 1e-20


def test_expressions():
    v, _ = cmzv.evaluate_expression("t(2)")
    assert near(v, mpmath.pi ** 2 / 8)
    v, _ = cmzv.evaluate_expression("Li(2;1/2)")
    assert near(v, mpmath.polylog(2, mpmath.mpf(1) / 2))
    with pytest.raises(ValueError):
        cmzv.evaluate_expression("q(2)")
