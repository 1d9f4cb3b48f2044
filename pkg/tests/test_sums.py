import math
import random
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetalab import sums, words
from zetalab.compositions import Composition, TwistedComposition, all_compositions, parse
from zetalab.xprec import XReal


def brute(kind, parts, n, twists=None):
    """Naive nested sum over all index chains."""
    r = len(parts)
    twists = twists or (1,) * r
    if r == 0:
        return Fraction(1)
    star = kind.endswith("*")
    chains = combinations_with_replacement(range(n, 0, -1), r) if star else \
        combinations(range(n, 0, -1), r)
    tot = Fraction(0)
    for ch in chains:
        term = Fraction(1)
        for k, s, m in zip(parts, twists, ch):
            d = 2 * m - 1 if kind.startswith("t") else m
            term *= Fraction(s) ** m / Fraction(d) ** k
        tot += term
    return tot


comps = st.lists(st.integers(1, 3), min_size=1, max_size=3).map(tuple)


@given(st.sampled_from(sums.KINDS), comps, st.integers(0, 9))
def test_finite_sums_match_brute_force(kind, parts, n):
    assert sums.finite_sum(kind, Composition(parts), n) == brute(kind, parts, n)


@given(comps, st.integers(0, 8), st.data())
def test_twisted_sums_match_brute_force(parts, n, data):
    tw = tuple(data.draw(st.sampled_from((1, -1))) for _ in parts)
    assert sums.zeta_n(TwistedComposition(parts, tw), n) == brute("z", parts, n, tw)


def test_examples():
    assert sums.zeta_n(Composition((1,)), 3) == Fraction(11, 6)
    for k in range(1, 6):
        assert sums.t_n(Composition((k,)), 1) == 1
    assert sums.t_n(Composition((1, 1)), 2) == Fraction(1, 3)


def test_empty_and_short_conventions():
    for kind in sums.KINDS:
        for n in range(4):
            assert sums.finite_sum(kind, Composition(()), n) == 1
    assert sums.zeta_n(Composition((1, 1, 1)), 2) == 0
    assert sums.t_n(Composition((2, 1)), 1) == 0


def test_offset_shifts_outer_bound():
    c = Composition((2, 1))
    assert sums.zeta_star_n(c, 5, offset=1) == sums.zeta_star_n(c, 6)
    with pytest.raises(ValueError):
        sums.zeta_n(c, 0, offset=-1)


def test_alpha_examples():
    for c in all_compositions(4):
        for n in range(0, 21, 4):
            assert sums.zeta_n_alpha(c, n, 1) == sums.zeta_n(c, n)
    assert sums.zeta_n_alpha(Composition((1,)), 2, Fraction(1, 2)) == Fraction(8, 3)
    assert sums.zeta_star_n_alpha(Composition((2,)), 1, Fraction(1, 2)) == 4
    with pytest.raises(ValueError):
        sums.zeta_n_alpha(Composition((1,)), 3, -2)


def test_partial_star():
    c = Composition((2, 1))
    assert sums.partial_star("z*", c, 6, 1) == sums.zeta_star_n(c, 6)
    x = Fraction(2, 7)
    assert sums.partial_star("z*", Composition((1,)), 2, x) == x + x ** 2 / 2
    assert sums.partial_star("t*", Composition((1, 2)), 5, 0) == 0
    # brute-force double loop for depth 2
    want = sum(x ** m / (n * m ** 2) for n in range(1, 5) for m in range(1, n + 1))
    assert sums.partial_star("z*", Composition((1, 2)), 4, x) == want
    xr = sums.partial_star("z*", Composition((1, 2)), 4, XReal.from_fraction(x))
    assert abs(float(xr - XReal.from_fraction(want))) < 1e-30


def test_bell_partial():
    assert sums.bell_partial(0, 0, [Fraction(1)]) == 1
    for n in range(1, 6):
        assert sums.bell_partial(n, 0, [Fraction(1)] * (n + 1)) == 0
    x = Fraction(3, 5)
    for n in range(1, 9):
        xs = [Fraction((-1) ** (j - 1) * math.factorial(j - 1)) / x ** j for j in range(1, n + 2)]
        for k in range(1, n + 1):
            want = Fraction((-1) ** (n - k) * math.factorial(n - 1)) / x ** n \
                * sums.zeta_n(Composition((1,) * (k - 1)), n - 1)
            assert sums.bell_partial(n, k, xs) == want


def test_central_binomial_and_beta_half():
    assert sums.beta_half(0) == 2
    assert sums.central_binomial(2) == Fraction(3, 8)
    assert sums.beta_half(1) == Fraction(4, 3)
    with mpmath.workdps(30):
        for n in range(6):
            assert abs(mpmath.beta(0.5, n + 1) - mpmath.mpf(sums.beta_half(n).numerator)
                       / sums.beta_half(n).denominator) < 1e-25


def test_a_coeff_forms_agree():
    assert sums.a_coeff(3, 0) == sums.central_binomial(3)
    for n in range(1, 13):
        for k in range(6):
            a = sums.a_coeff(n, k)
            assert a == sums.a_coeff_recurrence(n, k)
            if k >= 1:
                assert a == sums.a_coeff_cauchy(n, k)


def test_ab_sequences():
    rng = random.Random(1)
    for barred in (False, True):
        for m in range(1, 7):
            for n in (1, 4, 25):
                xs = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n)]
                A, B = sums.AB_sequences(xs, m, n, barred=barred)
                assert A == math.factorial(m) * B
    xs = [Fraction(1, 2 * k - 1) for k in range(1, 13)]
    assert sums.AB_sequences(xs, 1, 12)[0] == sum(xs)
    for m in range(1, 5):
        assert sums.AB_sequences(xs, m, 12, barred=True)[1] == sums.t_n(Composition((1,) * m), 12)


def test_b_sequence():
    b = sums.b_sequence(4)
    assert float(b[0]) == 1.0
    with mpmath.workdps(30):
        assert abs(float(b[1]) - float(2 * mpmath.log(2))) < 1e-15
        assert abs(float(b[1] - XReal(float(2 * mpmath.log(2))))) < 1e-15


def test_star1s():
    for m in range(1, 9):
        for n in range(0, 31, 3):
            lhs = sum(sums.zeta_star_n(Composition((1,) * (m - i)), n) * sums.zeta_n(Composition((i,)), n)
                      for i in range(1, m + 1))
            assert lhs == m * sums.zeta_star_n(Composition((1,) * m), n)


def test_parity_doubling():
    for c in all_compositions(6):
        if c.depth <= 3:
            for n in (1, 4, 15):
                assert sums.doubled_parity_sum(c, n) == sums.zeta_n(c, n)


def test_odd_denominator_telescoping():
    # psi^{(m-1)}(n+1/2) - psi^{(m-1)}(1/2) = (-1)^{m-1} (m-1)! 2^m t_n(m)
    for m in range(1, 6):
        for n in range(0, 31, 5):
            half = sum((1 / (Fraction(k) + Fraction(1, 2)) ** m for k in range(n)), Fraction(0))
            assert half == 2 ** m * sums.t_n(Composition((m,)), n)
            with mpmath.workdps(30):
                d = mpmath.psi(m - 1, n + 0.5) - mpmath.psi(m - 1, 0.5)
                want = (-1) ** (m - 1) * math.factorial(m - 1) * 2 ** m * sums.t_n(Composition((m,)), n)
                assert abs(d - mpmath.mpf(want.numerator) / want.denominator) < 1e-20


def test_star_nonstar_t_sums():
    for c in all_compositions(6):
        for n in (3, 20):
            via = sum(coef * sums.t_n(key, n) for key, coef in words.star_expand(c).items())
            assert sums.t_star_n(c, n) == via


@given(st.lists(st.integers(1, 2), min_size=1, max_size=3).map(tuple),
       st.lists(st.integers(1, 2), min_size=1, max_size=2).map(tuple),
       st.integers(1, 40), st.sampled_from(("z", "t")))
def test_stuffle_homomorphism(u, v, n, kind):
    if sum(u) + sum(v) > 5:
        return
    lhs = sums.finite_sum(kind, Composition(u), n) * sums.finite_sum(kind, Composition(v), n)
    assert lhs == sums.eval_words(words.stuffle(u, v), n, kind)


def test_stuffle_homomorphism_twisted():
    for su, sv in product((1, -1), repeat=2):
        u, v = parse("2" + ("~" if su < 0 else "")), parse("1" + ("~" if sv < 0 else "") + ",1")
        for n in (5, 17, 40):
            lhs = sums.zeta_n(u, n) * sums.zeta_n(v, n)
            assert lhs == sums.eval_words(words.stuffle(u, v), n, "z")
