from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetalab import apery
from zetalab.apery import SeriesSpecError, parse_series_spec
from zetalab.xprec import XReal

mpmath.mp.dps = 40


def f(x):
    return mpmath.mpf(float(x.hi)) + mpmath.mpf(float(x.lo))


# ---------------------------------------------------------------- parsing

def test_parse_examples():
    s = parse_series_spec("binom:2 denom:n1^1")
    assert (s.binom_power, s.denom_base, s.denom_exp, s.factors) == (2, "n1", 1, ())
    s = parse_series_spec("binom:1 denom:2n1^2 f:t(1)")
    assert s.factors[0].kind == "t" and s.factors[0].comp == (1,)
    s = parse_series_spec("binom:-2 denom:n^3 f:t(1)")
    assert s.term(2) == Fraction(16, 6) ** 2 * (1 + Fraction(1, 3)) / 8
    s = parse_series_spec("binom:1 denom:n^2 f:z(2,2)@-1 sign:alt")
    assert s.alternating and s.factors[0].offset == -1 and s.n0 == 3


@given(st.sampled_from(["-2", "-1", "0", "1", "2"]), st.sampled_from(["n", "n1", "2n1"]),
       st.integers(3, 5), st.sampled_from(["", " f:t(1)", " f:z*(1,2)@1", " sign:alt"]))
def test_parse_roundtrip(p, base, m, extra):
    s = parse_series_spec(f"binom:{p} denom:{base}^{m}{extra}")
    assert parse_series_spec(s.text()) == s


@pytest.mark.parametrize("text", [
    "binom:3 denom:n^2",
    "binom:1 denom:n^0",
    "binom:1 denom:m^2",
    "denom:n^2",
    "binom:1 denom:n^2 f:q(1)",
    "binom:1 denom:n^2 f:t(1@i)",
    "binom:2 denom:n^1 sign:neg",
    "binom:1 denom:n^2 bogus",
    "binom:-2 denom:n^2",         # decay 1: divergent
    "binom:0 denom:n1^1",
])
def test_parse_errors(text):
    with pytest.raises(SeriesSpecError):
        parse_series_spec(text)


# ------------------------------------------------------------ series route

def test_four_over_pi():
    v = apery.eval_series("binom:2 denom:n1^1", target_digits=20)
    assert abs(f(v) - 4 / mpmath.pi) < 1e-20


@pytest.mark.parametrize("k", [1, 2, 3])
def test_t_ones_family(k):
    v = apery.eval_series(f"binom:1 denom:n^1 f:t({','.join(['1'] * k)})", target_digits=14)
    want = mpmath.mpf(2 ** (k + 1) - 1) / 2 ** k * mpmath.zeta(k + 1)
    assert abs(f(v) - want) < 1e-12


def test_printed_decimals():
    v = apery.eval_series("binom:1 denom:2n1^1 f:t(1)", target_digits=12)
    assert abs(float(v) - 1.088793045) < 1e-8
    v = apery.eval_series("binom:1 denom:2n1^2 f:t(1)", target_digits=14)
    assert abs(float(v) - 0.108729731954) < 1e-11
    v = apery.eval_series("binom:-2 denom:n^3 f:t(1)", target_digits=12)
    assert abs(float(v) - 7.7112698415) < 1e-9


def test_alternating_route():
    r = apery.eval_series("binom:0 denom:n^1 sign:alt", target_digits=25, full=True)
    assert r.method == "alternating"
    assert abs(f(r.value) + mpmath.log(2)) < 1e-25


def test_result_metadata():
    r = apery.eval_series("binom:2 denom:n1^1", target_digits=20, full=True)
    assert r.route == "series" and r.terms >= 4096 and r.error <= 1e-20
    assert r.tail is not None and r.tail.L == 0


def test_target_not_reached():
    with pytest.raises(apery.TargetNotReached) as info:
        apery.eval_series("binom:1 denom:n^2 f:t(1,1,1,1,1,1)", target_digits=30, budget=10 ** 4)
    assert info.value.result.error > 1e-30


def test_numpy_fallback_agrees():
    a = apery.eval_series("binom:1 denom:2n1^2 f:t(1)", target_digits=16, use_numba=True)
    b = apery.eval_series("binom:1 denom:2n1^2 f:t(1)", target_digits=16, use_numba=False)
    assert abs(float(a - b)) < 1e-18


# ---------------------------------------------------------- integral route

def test_integral_examples():
    v = apery.eval_series_integral("binom:1 denom:n^2 f:t(1)")
    want = 7 * mpmath.zeta(3) / 2 - 3 * mpmath.zeta(2) * mpmath.log(2)
    assert abs(f(v) - want) < 1e-20
    v = apery.eval_series_integral("binom:2 denom:2n1^1")
    assert abs(f(v) - 4 * mpmath.catalan / mpmath.pi) < 1e-20
    assert abs(float(v) - 1.166243616) < 1e-9


def test_no_representation():
    with pytest.raises(apery.NoRepresentation):
        apery.eval_series_integral("binom:-1 denom:n^4 f:z*(3)")


@pytest.mark.parametrize("text", [
    "binom:1 denom:n^2 f:t(1)",
    "binom:1 denom:n^3 f:t(1,1)",
    "binom:2 denom:2n1^1",
    "binom:1 denom:2n1^2 f:t(1)",
])
def test_two_route_agreement(text):
    a = apery.eval_series(text, target_digits=12)
    b = apery.eval_series_integral(text)
    assert abs(float(a - b)) <= 1e-8


# ---------------------------------------------------------- arcsin family

def test_arcsin_series():
    half = XReal(0.5)
    assert abs(f(apery.arcsin_series(1, half)) - mpmath.pi / 6) < 1e-30
    assert abs(f(apery.arcsin_series(2, half)) - mpmath.pi ** 2 / 72) < 1e-30
    assert abs(f(apery.arcsin_series(3, half)) - (mpmath.pi / 6) ** 3 / 6) < 1e-30
    with pytest.raises(ValueError):
        apery.arcsin_series(1, XReal(1.0))


@settings(max_examples=20)
@given(st.floats(-0.95, 0.95))
def test_f11_is_arcsin(x):
    assert abs(f(apery.f_pm(1, 1, XReal(x))) - mpmath.asin(x)) < 1e-28


@pytest.mark.parametrize("p,m", [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3)])
def test_fpm_series_vs_integral(p, m):
    half = XReal(0.5)
    a = apery.f_pm(p, m, half)
    b = apery.f_pm_integral(p, m, half)
    assert abs(float(a - b)) < 1e-20
