from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from zetalab import xprec
from zetalab.xprec import XComplex, XReal

mpmath.mp.dps = 50
REL = 2.0 ** -96

nums = st.fractions(min_value=Fraction(-10 ** 6), max_value=Fraction(10 ** 6), max_denominator=10 ** 9)


def mp(x: XReal):
    return mpmath.mpf(float(x.hi)) + mpmath.mpf(float(x.lo))


def close(x: XReal, want, rel=REL):
    want = mpmath.mpf(want)
    return abs(mp(x) - want) <= rel * max(abs(want), mpmath.mpf(10) ** -300)


def q(f: Fraction):
    return mpmath.mpf(f.numerator) / f.denominator


@given(nums, nums)
def test_arithmetic_against_mpmath(a, b):
    x, y = XReal.from_fraction(a), XReal.from_fraction(b)
    assert close(x + y, q(a) + q(b), rel=4 * REL) or abs(q(a) + q(b)) < 1e-20
    assert close(x * y, q(a) * q(b), rel=4 * REL)
    if b:
        assert close(x / y, q(a) / q(b), rel=4 * REL)


@given(st.floats(1e-10, 1e10), st.floats(1e-10, 1e10))
def test_add_sub_roundtrip(a, b):
    assume(1e-10 < a / b < 1e10)
    x, y = XReal(a), XReal(b)
    assert abs(float((x + y) - y - x)) <= 1e-27 * a


@given(st.floats(1e-8, 1e8), st.floats(1e-8, 1e8))
def test_log_of_product(a, b):
    x, y = XReal(a), XReal(b)
    lhs = xprec.log(x * y)
    rhs = xprec.log(x) + xprec.log(y)
    assert abs(float(lhs - rhs)) <= 1e-27 * max(1.0, abs(float(lhs)))


@given(st.floats(-50, 50))
def test_unit_circle(theta):
    z = xprec.exp_i(XReal(theta))
    assert abs(float(z.re * z.re + z.im * z.im - 1)) < 1e-29


def test_examples():
    assert float((XReal(1.0) + XReal(2.0 ** -60)) - 1) == 2.0 ** -60
    s = xprec.sqrt(XReal(2.0))
    assert abs(float(s * s - 2)) < 1e-28
    i = XComplex(0.0, 1.0)
    ii = i * i
    assert float(ii.re) == -1.0 and float(ii.im) == 0.0
    assert close(xprec.atan2(XReal(1.0), XReal(1.0)), mpmath.pi / 4, rel=1e-29)
    assert close(xprec.exp(xprec.log(XReal(5.0))), 5, rel=1e-28)
    assert close(xprec.log(XReal(2.0)), mpmath.log(2), rel=1e-29)


def test_domain_errors():
    with pytest.raises((ValueError, ZeroDivisionError)):
        xprec.log(XReal(-1.0))
    with pytest.raises((ValueError, ZeroDivisionError)):
        xprec.sqrt(XReal(-2.0))
    with pytest.raises(ZeroDivisionError):
        XReal(1.0) / XReal(0.0)


def _machin() -> Fraction:
    def atan_inv(n, terms):
        return sum(Fraction((-1) ** k, (2 * k + 1) * n ** (2 * k + 1)) for k in range(terms))
    return 16 * atan_inv(5, 30) - 4 * atan_inv(239, 10)


def test_constants():
    assert abs(float(xprec.const_pi() - XReal.from_fraction(_machin()))) < 1e-30
    assert close(xprec.const_pi(), mpmath.pi, rel=1e-30)
    assert close(xprec.const_log2(), mpmath.log(2), rel=1e-30)
    assert close(xprec.const_catalan(), mpmath.catalan, rel=1e-30)
    # log 2 = 2 atanh(1/3)
    atanh = sum(Fraction(1, (2 * k + 1) * 3 ** (2 * k + 1)) for k in range(40))
    assert abs(float(xprec.const_log2() - XReal.from_fraction(2 * atanh))) < 1e-31


def test_arrays_and_sum():
    xs = XReal.array([Fraction(1, k) for k in range(1, 200)])
    h = sum((Fraction(1, k) for k in range(1, 200)), Fraction(0))
    assert abs(float(xs.sum() - XReal.from_fraction(h))) < 1e-29
    assert xs.is_array and len(xs) == 199


def test_decimal_string_roundtrip():
    x = xprec.const_pi() / 7
    s = x.to_decimal_string(30)
    back = XReal.from_fraction(Fraction(s))
    # half a unit in the 30th significant digit
    assert abs(float(back - x)) <= 0.5e-29 * abs(float(x))


def test_comparisons():
    a, b = XReal(1.0), XReal(1.0) + XReal(2.0 ** -80)
    assert a < b and b > a and a != b
    assert np.all(np.asarray((XReal.array([1, 2]) * 2).hi) == [2.0, 4.0])
