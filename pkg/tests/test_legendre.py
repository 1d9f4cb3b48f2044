from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetalab import legendre, xprec
from zetalab.legendre import legendre_P
from zetalab.xprec import XReal

mpmath.mp.dps = 40


def f(x):
    return mpmath.mpf(float(x.hi)) + mpmath.mpf(float(x.lo))


def test_low_degree_and_endpoint():
    assert legendre_P(0, Fraction(3, 7)) == 1
    assert legendre_P(1, Fraction(3, 7)) == Fraction(3, 7)
    assert legendre_P(2, 2 * Fraction(1) - 1) == 1
    assert all(legendre_P(n, 1) == 1 for n in range(15))
    assert legendre_P(3, Fraction(1, 2)) == Fraction(-7, 16)


@given(st.integers(0, 20), st.fractions(-1, 1, max_denominator=1000))
def test_parity(n, x):
    assert legendre_P(n, -x) == (-1) ** n * legendre_P(n, x)


@given(st.integers(0, 20), st.floats(-1, 1))
def test_recurrence_matches_mpmath(n, x):
    assert abs(f(legendre_P(n, XReal(x))) - mpmath.legendre(n, x)) < 1e-28


def test_fl_coefficient_examples():
    assert legendre.fl_coeff_logm(1, 1, exact=True) == Fraction(1, 2)
    assert legendre.fl_coeff_logm_sqrt(0, 0, exact=True) == 2
    assert legendre.fl_coeff_logm_sqrt(1, 0, exact=True) == Fraction(-2, 3)
    # int_0^1 (6x^2 - 6x + 1) log x dx
    assert legendre.fl_coeff_logm(2, 1, exact=True) == Fraction(-1, 6)


def _quad_logm(n, m):
    return legendre.integrate(lambda x: legendre_P(n, 2 * x - 1) * xprec.log(x) ** m,
                              "log-lower", with_error=True)


def _quad_logm_sqrt(n, m):
    return legendre.integrate(lambda x: legendre_P(n, 2 * x - 1) * xprec.log(x) ** m / xprec.sqrt(x),
                              "sqrt-lower", with_error=True)


@pytest.mark.parametrize("n", range(1, 11))
@pytest.mark.parametrize("m", range(1, 5))
def test_fl_logm_against_quadrature(n, m):
    q, err = _quad_logm(n, m)
    assert abs(float(q - legendre.fl_coeff_logm(n, m))) < 1e-14


@pytest.mark.parametrize("n", range(0, 9))
@pytest.mark.parametrize("m", range(0, 4))
def test_fl_logm_sqrt_against_quadrature(n, m):
    q, err = _quad_logm_sqrt(n, m)
    assert abs(float(q - legendre.fl_coeff_logm_sqrt(n, m))) < 1e-14


def test_fl_21_tight():
    q, _ = _quad_logm(2, 1)
    assert abs(float(q - legendre.fl_coeff_logm(2, 1))) < 1e-22


def test_derivative_trivial():
    assert abs(float(legendre.deriv_logm(1, 1, XReal(0.7))) - 1 / 0.7) < 1e-15


@pytest.mark.parametrize("n", range(1, 5))
def test_deriv_logm_finite_differences(n):
    want = mpmath.diff(lambda t: mpmath.log(t) ** 2, mpmath.mpf("0.7"), n)
    assert abs(f(legendre.deriv_logm(n, 2, XReal.from_fraction(Fraction(7, 10)))) - want) < 1e-10


@pytest.mark.parametrize("n", range(0, 5))
@pytest.mark.parametrize("m", range(0, 4))
def test_deriv_sqrt_and_alpha(n, m):
    x = XReal.from_fraction(Fraction(7, 10))
    a = legendre.deriv_logm_alpha(n, m, Fraction(1, 2), x)
    b = legendre.deriv_logm_sqrt(n, m, x)
    assert abs(float(a - b)) < 1e-18 * max(1.0, abs(float(b)))
    want = mpmath.diff(lambda t: mpmath.log(t) ** m / mpmath.sqrt(t), mpmath.mpf(7) / 10, n)
    assert abs(f(b) - want) < 1e-12 * max(1, abs(want))


def test_deriv_domain():
    with pytest.raises(ValueError):
        legendre.deriv_logm(1, 1, XReal(-1.0))
    with pytest.raises(ValueError):
        legendre.deriv_logm_alpha(1, 1, -2, XReal(0.5))


def test_elliptic_K():
    assert abs(f(legendre.elliptic_K(XReal(0.0))) - mpmath.pi / 2) < 1e-30
    half = XReal(0.5)
    agm = legendre.elliptic_K(half)
    assert abs(f(agm) - mpmath.ellipk(mpmath.mpf(1) / 2)) < 1e-29
    # 25 terms of a_n^2 / 2^n, tail bounded by a geometric series
    ser = legendre.elliptic_K_series(half, 25)
    tail = float(mpmath.pi / 2 * mpmath.binomial(50, 25) ** 2 / 16 ** 25 / 2 ** 25 * 2)
    assert abs(float(agm - ser)) <= tail
    big = legendre.elliptic_K_series(half, 110)
    assert abs(float(agm - big)) < 1e-25
    with pytest.raises(ValueError):
        legendre.elliptic_K(XReal(1.0))


def test_elliptic_K_fl_expansion():
    x = XReal.from_fraction(Fraction(3, 10))
    err = abs(float(legendre.elliptic_K_fl(x, 200) - legendre.elliptic_K(x)))
    assert err < 1e-6


def test_orthogonality():
    rule = legendre.make_rule()
    for a in range(13):
        for b in range(a, 13):
            v = legendre.integrate(lambda x: legendre_P(a, 2 * x - 1) * legendre_P(b, 2 * x - 1), rule)
            want = Fraction(1, 2 * a + 1) if a == b else Fraction(0)
            assert abs(float(v - XReal.from_fraction(want))) < 1e-22


_POINTS = [Fraction(1, 5), Fraction(1, 2), Fraction(9, 10)]


@pytest.mark.slow
@pytest.mark.parametrize("x", _POINTS)
@pytest.mark.parametrize("m", [1, 2, 3])
def test_fl_reconstruction_logm(x, m):
    xx = XReal.from_fraction(x)
    want = xprec.log(xx) ** m
    assert abs(float(legendre.fl_reconstruct_logm(m, xx, 500) - want)) < 1e-4


@pytest.mark.slow
@pytest.mark.parametrize("x", _POINTS)
@pytest.mark.parametrize("m", [1, 2, 3])
def test_fl_reconstruction_logm_sqrt(x, m):
    xx = XReal.from_fraction(x)
    want = xprec.log(xx) ** m / xprec.sqrt(xx)
    assert abs(float(legendre.fl_reconstruct_logm_sqrt(m, xx, 500) - want)) < 1e-4


def test_rule_invariants():
    for tags in ("none", "sqrt-lower", "log-lower", "sqrt-lower,sqrt-upper"):
        r = legendre.rule_from_tags(tags)
        assert abs(float(r.weights.sum()) - 1.0) < 1e-25
        # nodes within 1e-30 of 1 round to hi == 1.0, so check the exact complement
        assert float(min(r.nodes.hi)) > 0 and float(min(r.complement.hi)) > 0
    with pytest.raises(ValueError):
        legendre.rule_from_tags("log-upper")


def test_integrate_examples():
    # int x^{-1/2}(1-x) log x dx = -4 + 4/9
    v = legendre.integrate(lambda x: (1 - x) * xprec.log(x) / xprec.sqrt(x), "sqrt-lower")
    assert abs(float(v) - (-4 + Fraction(4, 9))) < 1e-25
    # (n, m) = (3, 2): 2! zeta*_3(1,1) / 3 = 2 * (1 + 1/2 + 1/3 choose...) computed exactly
    zs = sum(Fraction(1, a * b) for a in range(1, 4) for b in range(1, a + 1))
    v = legendre.integrate(lambda x, c: x ** 2 * xprec.log(c) ** 2, "log-lower,sqrt-upper",
                           complement=True)
    assert abs(float(v - XReal.from_fraction(2 * zs / 3))) < 1e-25
    # (n, k) = (2, 2): 2! 2^2 4^2 t*_2(1,1) / (2 * 6)
    ts = sum(Fraction(1, (2 * a - 1) * (2 * b - 1)) for a in range(1, 3) for b in range(1, a + 1))
    v = legendre.integrate(lambda x, c: x * xprec.log(c) ** 2 / xprec.sqrt(c), "sqrt-upper",
                           complement=True)
    assert abs(float(v - XReal.from_fraction(Fraction(2 * 4 * 16, 12) * ts))) < 1e-22


@pytest.mark.parametrize("n", range(0, 6))
@pytest.mark.parametrize("k", range(0, 4))
def test_beta_partial_b(n, k):
    want = mpmath.diff(lambda b: mpmath.beta(n + mpmath.mpf(1) / 2, b), mpmath.mpf(1) / 2, k)
    assert abs(f(legendre.beta_deriv_b_closed(n, k)) - want) < 1e-15 * max(1, abs(want))
