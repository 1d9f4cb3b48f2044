"""Registry of checkable identities and a runner that evaluates them.

Each :class:`Identity` pairs two independently computed sides (or, for
``exact-symbolic`` entries, one exact check) with a tolerance and a quote
anchor locating the display it comes from.  :func:`run` evaluates the
entries matching a glob in a thread pool and returns a :class:`Report`
sorted by id.

Verdicts: ``pass`` when the sides agree within the tolerance and the
combined error estimate is below it; ``fail`` when they differ by more than
tolerance plus combined error (or an exact check finds a mismatch, or a side
raises); ``inconclusive`` otherwise.
"""
from __future__ import annotations

import fnmatch
import json
import math
import random
import time
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable

import mpmath

from . import apery, cmzv, legendre, sums, words, xprec
from .compositions import (Composition, TwistedComposition, all_compositions,
                           compositions_of, hoffman_dual)
from .words import GaussQ, LinComb
from .xprec import XComplex, XReal, xr

__all__ = [
    "Context",
    "Side",
    "Identity",
    "Record",
    "Report",
    "RegistryError",
    "REGISTRY",
    "register",
    "identities",
    "run",
    "explain",
]


class RegistryError(ValueError):
    """Malformed registry entry or unknown identity id."""


@dataclass(frozen=True)
class Context:
    digits: int = 32
    budget: int = 10 ** 6
    # replaces each numeric entry's own tolerance when set
    tolerance: float | None = None

    @property
    def series_digits(self) -> int:
        return max(10, min(20, self.digits - 12))


Value = tuple  # (XReal, error)


@dataclass(frozen=True)
class Side:
    text: str
    plan: str
    evaluate: Callable[[Context], Value] | None = None


@dataclass(frozen=True)
class Identity:
    id: str
    paper_ref: str
    lhs: Side
    rhs: Side
    tolerance: float
    kind: str = "numeric"
    relative: bool = False
    # exact-symbolic entries: returns (cases, mismatches)
    check: Callable[[], tuple] | None = None
    note: str = ""

    def __post_init__(self):
        if not self.paper_ref or not self.paper_ref.strip():
            raise RegistryError(f"{self.id}: a quote anchor is required")
        if self.kind not in ("numeric", "exact-symbolic"):
            raise RegistryError(f"{self.id}: unknown kind {self.kind!r}")
        if self.kind == "exact-symbolic" and self.check is None:
            raise RegistryError(f"{self.id}: exact entries need a check")
        if self.kind == "numeric" and (self.lhs.evaluate is None or self.rhs.evaluate is None):
            raise RegistryError(f"{self.id}: numeric entries need two evaluators")


REGISTRY: dict[str, Identity] = {}


def register(ident: Identity) -> Identity:
    if ident.id in REGISTRY:
        raise RegistryError(f"duplicate id {ident.id!r}")
    REGISTRY[ident.id] = ident
    return ident


def identities(pattern: str = "*") -> list[Identity]:
    return [REGISTRY[k] for k in sorted(REGISTRY) if fnmatch.fnmatchcase(k, pattern)]


# ------------------------------------------------------------- constants

EPS = xprec.EPS
TOL_CONST = 1e-20
TOL_SERIES = 1e-10
TOL_PRINTED = 1e-6
TOL_QUAD = 1e-14
TOL_IDENTITY = 1e-8


def _pi() -> XReal:
    return xprec.const_pi()


def _l2() -> XReal:
    return xprec.const_log2()


def _G() -> XReal:
    return xprec.const_catalan()


def _tc(parts, twists=None) -> TwistedComposition:
    parts = tuple(parts)
    return TwistedComposition(parts, tuple(twists) if twists else (1,) * len(parts))


def _zeta(*parts, twists=None) -> XReal:
    return cmzv.cmzv(_tc(parts, twists)).re


def _tval(*parts, twists=None) -> XReal:
    return cmzv.mtv(_tc(parts, twists)).re


def _li(parts, args) -> XComplex:
    return cmzv.li(tuple(parts), tuple(args))


_W = GaussQ(Fraction(1, 2), Fraction(1, 2))


def _beta4() -> XReal:
    return cmzv.cmzv(_tc((4,), (1j,))).im


def _closed(text: str, fn: Callable[[], XReal], terms: int = 8) -> Side:
    def ev(ctx):
        v = xr(fn())
        return v, terms * 64 * EPS * max(1.0, abs(float(v)))
    return Side(text, "closed form from cached constants", ev)


def _decimal(text: str) -> Side:
    q = Fraction(text)

    def ev(ctx):
        return XReal.from_fraction(q), 0.0
    return Side(text, "printed decimal", ev)


def _series_side(spec: str) -> Side:
    def ev(ctx):
        try:
            r = apery.eval_series(spec, target_digits=ctx.series_digits,
                                  budget=ctx.budget, full=True)
        except apery.TargetNotReached as exc:
            r = exc.result
        return r.value, r.error
    return Side(f"sum[{spec}]", "direct summation with tail fit", ev)


def _integral_side(spec: str) -> Side:
    def ev(ctx):
        return apery.eval_series_integral(spec, with_error=True)
    rep = apery.find_representation(spec)[0].name
    return Side(f"sum[{spec}]", f"integral representation '{rep}'", ev)


def _sum_sides(text: str, parts: list) -> Side:
    """Rational combination ``sum c * side``."""
    def ev(ctx):
        tot, err = XReal(0.0), 0.0
        for c, side in parts:
            v, e = side.evaluate(ctx)
            tot = tot + xr(v) * XReal.from_fraction(Fraction(c))
            err += abs(float(c)) * e
        return tot, err
    return Side(text, " + ".join(s.plan for _, s in parts[:1]) + " per term", ev)


def _ii(word) -> tuple:
    return cmzv.iterint_with_error(tuple(word))


def _ii_lincomb(lc, lower=0) -> tuple:
    tot, err = XComplex(0.0, 0.0), 0.0
    for w, c in lc.items():
        if lower == 0:
            v, e = _ii(w)
        else:
            v = cmzv.iterint(tuple(w), lower=lower)
            e = 64 * EPS * max(1.0, abs(complex(v)))
        tot = tot + v * XComplex.from_gauss(GaussQ.coerce(c))
        err += e * abs(complex(GaussQ.coerce(c)))
    return tot, err


def _mp(x) -> mpmath.mpf:
    x = xr(x)
    return mpmath.mpf(float(x.hi)) + mpmath.mpf(float(x.lo))


def _xmp(v) -> XReal:
    hi = float(v)
    return XReal(hi, float(v - hi))


def _pairwise(ident_id, ref, lhs, rhs, tol, **kw):
    return register(Identity(ident_id, ref, lhs, rhs, tol, **kw))


def _two_route(ident_id, ref, spec, rhs, tol=TOL_SERIES, **kw):
    """Register ``id`` (series route) and ``id-int`` (integral route) against the same rhs."""
    _pairwise(ident_id, ref, _series_side(spec), rhs, tol, **kw)
    _pairwise(ident_id + "-int", ref, _integral_side(spec), rhs, tol, **kw)


def _ones(k: int) -> str:
    return ",".join(["1"] * k)


def _f(kind: str, parts, off: int = 0) -> str:
    if not parts:
        return ""
    s = f" f:{kind}({','.join(map(str, parts))})"
    return s + (f"@{off}" if off else "")


# ================================================== squared binomial, (n+1)

def _reg_squared_n1():
    pi, l2, G = _pi, _l2, _G
    anchor = r"\sum_{n=0}^\infty \bigg[\frac1{4^n}\binn\bigg]^2\frac1{n+1}=\frac4{\pi}"
    _two_route("sq-n1-m1", anchor, "binom:2 denom:n1^1",
               _closed("4/pi", lambda: 4 / pi()))
    _two_route("sq-n1-m2", r"\frac1{(n+1)^2}=\frac{16}{\pi}-4", "binom:2 denom:n1^2",
               _closed("16/pi - 4", lambda: 16 / pi() - 4))
    _two_route("sq-n1-m3", r"\frac{16}{\pi}(3-2G-\pi+\pi\log 2)", "binom:2 denom:n1^3",
               _closed("16/pi (3 - 2G - pi + pi log 2)",
                       lambda: (3 - 2 * G() - pi() + pi() * l2()) * 16 / pi()))
    _two_route("sq-n1-m4", r"\frac{128}{\pi}\left(1-G-2{\rm Im}\Li_3", "binom:2 denom:n1^4",
               _closed("128/pi (1 - G - 2 Im Li3((1+i)/2)) - 48 + 6 pi^2 + 64 log2 - 24 log^2 2",
                       lambda: (1 - G() - 2 * _li((3,), (_W,)).im) * 128 / pi() - 48
                       + 6 * pi() * pi() + 64 * l2() - 24 * l2() * l2()))
    _two_route("sq-n1-zs1", r"\frac{\ze_{n+1}^\star(1)}{n+1}=\frac4{\pi}(1-\log 2)",
               "binom:2 denom:n1^1 f:z*(1)@1",
               _closed("4/pi (1 - log 2)", lambda: (1 - l2()) * 4 / pi()),
               note="as printed; the value of the series is 16/pi (1 - log 2), see sq-n1-zs1-16")
    _two_route("sq-n1-zs1-16", r"\frac{\ze_{n+1}^\star(1)}{n+1}=\frac4{\pi}(1-\log 2)",
               "binom:2 denom:n1^1 f:z*(1)@1",
               _closed("16/pi (1 - log 2)", lambda: (1 - l2()) * 16 / pi()),
               note="printed constant 4 replaced by 16, as given by the general m formula")
    _two_route("sq-n1-zs11", r"\frac4{\pi}\big(12-2\ze(2)-16\log 2+8\log^2(2)\big)",
               "binom:2 denom:n1^1 f:z*(1,1)@1",
               _closed("4/pi (12 - 2 zeta(2) - 16 log 2 + 8 log^2 2)",
                       lambda: (12 - 2 * _zeta(2) - 16 * l2() + 8 * l2() * l2()) * 4 / pi()))


# ================================================= squared binomial, (2n+1)

def _mtv_expansion(m: int, l: int, eta: int, star_family: bool) -> list:
    """``[(coeff, parts, twists)]`` for ``sum_d sum_{|s|=m+2, s1>=2} 2^{d-1} f(s1+l-2, s2..; eta, 1..)``."""
    out = []
    for s in compositions_of(m + 2):
        if s[0] < 2:
            continue
        d = len(s)
        parts = (s[0] + l - 2,) + tuple(s[1:])
        out.append((2 ** (d - 1), parts, (eta,) + (1,) * (d - 1)))
    return out


def _mtv_combo(text, terms, scale_fn=lambda: XReal(1.0), fam="t") -> Side:
    def ev(ctx):
        tot = XReal(0.0)
        for c, parts, tw in terms:
            v = _tval(*parts, twists=tw) if fam == "t" else _zeta(*parts, twists=tw)
            tot = tot + v * c
        v = tot * scale_fn()
        return v, 64 * EPS * len(terms) * max(1.0, abs(float(v)))
    return Side(text, "MtV/CMZV iterated integrals", ev)


def _reg_squared_odd():
    pi, l2, G = _pi, _l2, _G
    _two_route("sq-odd-m0", r"\frac1{2n+1}&=-\frac{4t(\bar 2)}{\pi}=\frac{4G}{\pi}",
               "binom:2 denom:2n1^1", _closed("4G/pi", lambda: 4 * G() / pi()))
    _two_route("sq-odd-m1", r"\frac{3\pi^2}{8}+\frac{\log^2(2)}{2}", "binom:2 denom:2n1^2",
               _closed("3 pi^2/8 + log^2 2/2 - 16/pi Im Li3((1+i)/2)",
                       lambda: pi() * pi() * Fraction(3, 8) + l2() * l2() / 2
                       - _li((3,), (_W,)).im * 16 / pi()))
    _two_route("sq-odd-m2", r"\frac{64}{\pi}{\rm Im}\Li_4\left(\frac{1+i}{2}\right)-\frac{48}{\pi}G",
               "binom:2 denom:2n1^3",
               _closed("3/4 pi^2 log 2 + log^3 2/3 + 64/pi Im Li4((1+i)/2) - 48 G/pi",
                       lambda: pi() * pi() * l2() * Fraction(3, 4) + l2() ** 3 / 3
                       + _li((4,), (_W,)).im * 64 / pi() - 48 * G() / pi()),
               note="as printed; with G(4) in place of G the display matches, see sq-odd-m2-g4")
    _two_route("sq-odd-m2-g4", r"G(4):=\sum_{n=0}^\infty \frac{(-1)^n}{(2n+1)^4}",
               "binom:2 denom:2n1^3",
               _closed("3/4 pi^2 log 2 + log^3 2/3 + 64/pi Im Li4((1+i)/2) - 48 G(4)/pi",
                       lambda: pi() * pi() * l2() * Fraction(3, 4) + l2() ** 3 / 3
                       + _li((4,), (_W,)).im * 64 / pi() - 48 * _beta4() / pi()),
               note="Catalan's constant replaced by G(4); the defined but otherwise unused constant")
    _pairwise("sq-odd-m1-mtv", r"&=-\frac{4}{\pi}\Big(t(\bar3)+2t(\bar 2,1)\Big)",
              _series_side("binom:2 denom:2n1^2"),
              _mtv_combo("-4/pi (t(3~) + 2 t(2~,1))", [(1, (3,), (-1,)), (2, (2, 1), (-1, 1))],
                         lambda: -4 / pi()), TOL_SERIES)
    _pairwise("sq-odd-m2-mtv", r"-\frac{4}{\pi}\Big(t(\bar4)+2t(\bar3,1)+2t(\bar 2,2)+4t(\bar2,1,1)\Big)",
              _series_side("binom:2 denom:2n1^3"),
              _mtv_combo("-4/pi (t(4~) + 2t(3~,1) + 2t(2~,2) + 4t(2~,1,1))",
                         [(1, (4,), (-1,)), (2, (3, 1), (-1, 1)), (2, (2, 2), (-1, 1)),
                          (4, (2, 1, 1), (-1, 1, 1))], lambda: -4 / pi()), TOL_SERIES)
    for m in range(4):
        terms = [(2 * c, p, t) for c, p, t in _mtv_expansion(m, 2, -1, False)]
        _pairwise(f"sq-odd-general-m{m}",
                  r"-\frac{2}{\pi} \sum_{d=1}^{m+1}\sum_{|\bfs|=m+2,\bfs\in\N^d, s_1\ge 2} 2^d t(\bfs;-1,1_{d-1})",
                  _series_side(f"binom:2 denom:2n1^{m + 1}"),
                  _mtv_combo(f"-2/pi sum 2^d t(s; -1, 1..), |s| = {m + 2}", terms,
                             lambda: -2 / pi()), TOL_SERIES)
    for m in range(3):
        parts = []
        for k in range(m + 1):
            spec = "binom:0 denom:2n1^2 sign:alt" + _f("t", (1,) * k) + _f("t*", (1,) * (m - k), 1)
            parts.append((4, _series_side(spec)))
        combo = _sum_sides(f"4 sum_k sum_n (-1)^n t_n(1_k) t*_(n+1)(1_(m-k))/(2n+1)^2, m={m}", parts)

        def scaled(ctx, combo=combo):
            v, e = combo.evaluate(ctx)
            return v / _pi(), e / math.pi
        _pairwise(f"sq-odd-fl-m{m}",
                  r"\frac{4}{\pi}\sum_{k=0}^m \sum_{n=0}^\infty (-1)^n\frac{t_n(1_k)t_{n+1}^\star(1_{m-k})}{(2n+1)^2}",
                  _series_side(f"binom:2 denom:2n1^{m + 1}"),
                  Side(combo.text + " / pi", "alternating acceleration per term", scaled),
                  TOL_SERIES)


# ====================================================== first power, t_n(1_k)

def _reg_first_power_r():
    l2 = _l2
    for k in (1, 2, 3):
        _two_route(f"lin-t-n1-k{k}", r"\frac{2^{k+1}-1}{2^k}\ze(k+1)",
                   f"binom:1 denom:n^1 f:t({_ones(k)})",
                   _closed(f"(2^{k + 1}-1)/2^{k} zeta({k + 1})",
                           lambda k=k: _zeta(k + 1) * Fraction(2 ** (k + 1) - 1, 2 ** k)))
    _two_route("lin-t1-n2", r"\frac{7}{2}\ze(3)-3\ze(2)\log 2", "binom:1 denom:n^2 f:t(1)",
               _closed("7/2 zeta(3) - 3 zeta(2) log 2",
                       lambda: _zeta(3) * Fraction(7, 2) - 3 * _zeta(2) * l2()))
    _two_route("lin-t11-n2", r"\frac{45}{16}\ze(4)-\frac7{2}\ze(3)\log 2",
               "binom:1 denom:n^2 f:t(1,1)",
               _closed("45/16 zeta(4) - 7/2 zeta(3) log 2",
                       lambda: _zeta(4) * Fraction(45, 16) - _zeta(3) * l2() * Fraction(7, 2)))
    _two_route("lin-t1-n3", r"\frac{15}{4}\ze(4)+3\log^2(2)\ze(2)-7\ze(3)\log 2",
               "binom:1 denom:n^3 f:t(1)",
               _closed("15/4 zeta(4) + 3 log^2 2 zeta(2) - 7 zeta(3) log 2",
                       lambda: _zeta(4) * Fraction(15, 4) + 3 * l2() * l2() * _zeta(2)
                       - 7 * _zeta(3) * l2()))
    for k in (1, 2, 3):
        for m in (0, 1, 2):
            _pairwise(f"lin-t-rvalue-k{k}-m{m}",
                      r"=\frac1{2^k}R(k+1,1_m)",
                      _series_side(f"binom:1 denom:n^{m + 1} f:t({_ones(k)})"),
                      _closed(f"R({k + 1}{',1' * m})/2^{k}",
                              lambda k=k, m=m: cmzv.rvalue((k + 1,) + (1,) * m) / 2 ** k),
                      TOL_SERIES)
    for k in (2, 3, 4, 5):
        _pairwise(f"rvalue-depth1-k{k}", r"R(k)=2^{k}\sum_{n=1}^\infty \frac{1}{(2n-1)^k}=(2^k-1)\ze(k)",
                  _closed(f"R({k})", lambda k=k: cmzv.rvalue((k,))),
                  _closed(f"(2^{k}-1) zeta({k})", lambda k=k: _zeta(k) * (2 ** k - 1)),
                  TOL_CONST)
    # R-value integral, quadrature on (0, 1)
    for m in (1, 2):
        for n in (1, 2):
            def lhs(ctx, m=m, n=n):
                c = Fraction((-1) ** (m + n - 1), math.factorial(m) * math.factorial(n - 1))

                def f(x, cx):
                    return (xprec.log(x) ** m * xprec.log(cx) ** (n - 1)
                            / (cx * xprec.sqrt(x)))
                v, e = legendre.integrate(f, "sqrt-lower,sqrt-upper", with_error=True,
                                          complement=True)
                return v * XReal.from_fraction(c), e * abs(float(c))
            _pairwise(f"rvalue-integral-m{m}-n{n}",
                      r"\frac{\log^m(t)\log^{n-1}(1-t)}{1-t}t^{-1/2}dt",
                      Side(f"integral form of R({m + 1}{',1' * (n - 1)})", "quadrature", lhs),
                      _closed(f"R({m + 1}{',1' * (n - 1)})",
                              lambda m=m, n=n: cmzv.rvalue((m + 1,) + (1,) * (n - 1))),
                      TOL_SERIES)


# =========================================== products t_n(1_k) zeta*_n(1_m)

def _reg_products():
    for m in (1, 2, 3):
        for k in (1, 2, 3):
            closed = _closed(
                f"C({m + k},{k}) (2^{m + k + 1}-1)/2^{k} zeta({m + k + 1})",
                lambda m=m, k=k: _zeta(m + k + 1)
                * Fraction(math.comb(m + k, k) * (2 ** (m + k + 1) - 1), 2 ** k))
            inv = f"binom:-1 denom:n^2" + _f("z", (1,) * (m - 1), -1) + _f("t*", (1,) * k)
            lin = f"binom:1 denom:n^1" + _f("t", (1,) * k) + _f("z*", (1,) * m)
            anchor = r"=\binom{m+k}{k}\frac{2^{m+k+1}-1}{2^k}\ze(m+k+1)"
            _two_route(f"prod-inv-m{m}-k{k}", anchor, inv, closed)
            _two_route(f"prod-lin-m{m}-k{k}", anchor, lin, closed)
    for m in (1, 2, 3):
        for k in (1, 2, 3):
            if m >= k:
                continue
            left = "binom:-1 denom:n^2" + _f("z", (1,) * (m - 1), -1) + _f("t*", (1,) * k)
            right = "binom:-1 denom:n^2" + _f("z", (1,) * (k - 1), -1) + _f("t*", (1,) * m)
            L, R = _series_side(left), _series_side(right)

            def lhs(ctx, L=L, k=k):
                v, e = L.evaluate(ctx)
                return v * 2 ** k, e * 2 ** k

            def rhs(ctx, R=R, m=m):
                v, e = R.evaluate(ctx)
                return v * 2 ** m, e * 2 ** m
            _pairwise(f"prod-duality-m{m}-k{k}",
                      r"2^k\sum_{n=1}^\infty  \frac{4^n}{\binn} \frac{\ze_{n-1}(1_{m-1})t^\star_n(1_k)}{n^2}=2^m",
                      Side(f"2^{k} sum[{left}]", L.plan, lhs),
                      Side(f"2^{m} sum[{right}]", R.plan, rhs), TOL_IDENTITY)


# ========================================= first power over 2n+1, t*_{n+1}(1_m)

def _reg_odd_tstar():
    pi, l2 = _pi, _l2
    rows = [
        (0, r"\frac{1}{2n+1}=\frac4{\pi}t(2)=\frac3{\pi}\ze(2)=\frac{\pi}{2}", "pi/2",
         lambda: pi() / 2),
        (1, r"=\pi \log 2", "pi log 2", lambda: pi() * l2()),
        (2, r"=\frac{\pi^3}{24}+\pi \log^2(2)", "pi^3/24 + pi log^2 2",
         lambda: pi() ** 3 / 24 + pi() * l2() * l2()),
        (3, r"=\frac{\pi}{4}\ze(3)+\frac{2\pi}{3}\log^3(2)+\frac{\pi}{12}\log^2(2)",
         "pi/4 zeta(3) + 2pi/3 log^3 2 + pi/12 log^2 2",
         lambda: pi() / 4 * _zeta(3) + pi() * 2 / 3 * l2() ** 3 + pi() / 12 * l2() ** 2),
    ]
    for m, anchor, text, fn in rows:
        spec = "binom:1 denom:2n1^1" + _f("t*", (1,) * m, 1)
        note = "as printed; pi^3/12 log 2 in place of the last term matches, see lin-odd-ts-m3-fixed" \
            if m == 3 else ""
        _two_route(f"lin-odd-ts-m{m}", anchor, spec, _closed(text, fn), note=note)
    _two_route("lin-odd-ts-m3-fixed",
               r"=\frac{\pi}{4}\ze(3)+\frac{2\pi}{3}\log^3(2)+\frac{\pi}{12}\log^2(2)",
               "binom:1 denom:2n1^1 f:t*(1,1,1)@1",
               _closed("pi/4 zeta(3) + 2pi/3 log^3 2 + pi^3/12 log 2",
                       lambda: pi() / 4 * _zeta(3) + pi() * 2 / 3 * l2() ** 3
                       + pi() ** 3 / 12 * l2()),
               note="weight-consistent reading of the last term")
    for m in range(4):
        terms = _mtv_expansion(m, 2, 1, False)
        _pairwise(f"lin-odd-ts-mtv-m{m}",
                  r"\frac4{\pi} \sum_{d=1}^{m+1}\sum_{\substack{\bfs=(s_1,\dots,s_d)\in\N^d \\ |\bfs|=m+2,s_1\ge 2}} 2^{d-1} t(\bfs)",
                  _series_side("binom:1 denom:2n1^1" + _f("t*", (1,) * m, 1)),
                  _mtv_combo(f"4/pi sum 2^(d-1) t(s), |s| = {m + 2}", terms, lambda: 4 / pi()),
                  TOL_SERIES)
    for m in range(3):
        parts = []
        for k in range(m + 1):
            spec = "binom:0 denom:2n1^2" + _f("t", (1,) * k) + _f("t*", (1,) * (m - k), 1)
            parts.append((4, _series_side(spec)))
        combo = _sum_sides(f"4 sum_k sum_n t_n(1_k) t*_(n+1)(1_(m-k))/(2n+1)^2, m={m}", parts)

        def scaled(ctx, combo=combo):
            v, e = combo.evaluate(ctx)
            return v / _pi(), e / math.pi
        _pairwise(f"lin-odd-ts-fl-m{m}",
                  r"=&\,\frac4{\pi}\sum_{k=0}^m \sum_{n=0}^\infty \frac{t_n(1_k)t_{n+1}^\star(1_{m-k})}{(2n+1)^2}",
                  _series_side("binom:1 denom:2n1^1" + _f("t*", (1,) * m, 1)),
                  Side(combo.text + " / pi", "tail-fit summation per term", scaled), TOL_SERIES)


# ========================================================== pro-MtV

def _reg_pro_mtv():
    for fam in ("z", "t"):
        for m in (0, 1, 2):
            for l in (2, 3):
                for eta in (1, -1):
                    parts = []
                    for k in range(m + 1):
                        if fam == "z":
                            spec = f"binom:0 denom:n1^{l}" + _f("z", (1,) * (m - k)) \
                                + _f("z*", (1,) * k, 1)
                        else:
                            spec = f"binom:0 denom:2n1^{l}" + _f("t", (1,) * (m - k)) \
                                + _f("t*", (1,) * k, 1)
                        if eta == -1:
                            spec = spec.replace(f"^{l}", f"^{l} sign:alt", 1)
                        parts.append((1, _series_side(spec)))
                    name = "pos" if eta == 1 else "neg"
                    lhs = _sum_sides(f"sum_k sum_n eta^n {fam}-family, m={m}, l={l}, eta={eta}", parts)
                    terms = _mtv_expansion(m, l, eta, False)
                    anchor = (r"=&\, \sum_{d=1}^{m+1}\sum_{|\bfs|=m+2,s_1\ge2} 2^{d-1} \ze(s_1+l-2,s_2,\dots,s_d;\eta,1_{d-1})"
                              if fam == "z" else
                              r"=&\, \sum_{d=1}^{m+1}\sum_{|\bfs|=m+2,s_1\ge2} 2^{d-1} t(s_1+l-2,s_2,\dots,s_d;\eta,1_{d-1})")
                    rhs = _mtv_combo(f"sum 2^(d-1) {fam}(s1+{l}-2, ..; {eta}, 1..)", terms, fam=fam)
                    note = "as printed" if eta == -1 else ""
                    _pairwise(f"pro-mtv-{fam}-m{m}-l{l}-{name}", anchor, lhs, rhs, TOL_IDENTITY,
                              note=note)
                    if eta == -1:
                        signed = _mtv_combo(f"-sum 2^(d-1) {fam}(s1+{l}-2, ..; -1, 1..)", terms,
                                            lambda: XReal(-1.0), fam=fam)
                        _pairwise(f"pro-mtv-{fam}-m{m}-l{l}-neg-signed", anchor, lhs, signed,
                                  TOL_IDENTITY,
                                  note="right side multiplied by eta, matching eta^(n+1) on the left")


# =================================================== corollary examples

def _reg_corollaries():
    l2 = _l2
    z = _zeta
    for r in (1, 2, 3):
        _two_route(f"cor-zs1r-r{r}", r"=\ze(r+1,1)-2^{r+2}t(r+1,1)+2\ze(r+1)\log 2",
                   f"binom:1 denom:n^2 f:z*({_ones(r)})",
                   _closed(f"zeta({r + 1},1) - 2^{r + 2} t({r + 1},1) + 2 zeta({r + 1}) log 2",
                           lambda r=r: z(r + 1, 1) - _tval(r + 1, 1) * 2 ** (r + 2)
                           + 2 * z(r + 1) * l2()))
    _two_route("cor-inv-z1-ts1", r"=16(3t(4,1)+t(3,2))=45\ze(4)\log 2-31\ze(5)",
               "binom:-1 denom:n^3 f:z(1)@-1 f:t*(1)",
               _closed("45 zeta(4) log 2 - 31 zeta(5)", lambda: 45 * z(4) * l2() - 31 * z(5)))
    _pairwise("cor-inv-z1-ts1-mtv", r"=16(3t(4,1)+t(3,2))=45\ze(4)\log 2-31\ze(5)",
              _series_side("binom:-1 denom:n^3 f:z(1)@-1 f:t*(1)"),
              _mtv_combo("16 (3 t(4,1) + t(3,2))", [(48, (4, 1), (1, 1)), (16, (3, 2), (1, 1))]),
              TOL_SERIES)
    _two_route("cor-t1-zs11", r"=\frac3{2}\ze(2)\ze(3)+31\ze(5)-45\ze(4)\log 2",
               "binom:1 denom:n^2 f:t(1) f:z*(1,1)",
               _closed("3/2 zeta(2) zeta(3) + 31 zeta(5) - 45 zeta(4) log 2",
                       lambda: z(2) * z(3) * Fraction(3, 2) + 31 * z(5) - 45 * z(4) * l2()))
    _two_route("cor-zs21", r"=\frac{75}{8}\ze(5)-4\ze(4)\log 2-3\ze(2)\ze(3)",
               "binom:1 denom:n^2 f:z*(2,1)",
               _closed("75/8 zeta(5) - 4 zeta(4) log 2 - 3 zeta(2) zeta(3)",
                       lambda: z(5) * Fraction(75, 8) - 4 * z(4) * l2() - 3 * z(2) * z(3)))
    _two_route("cor-t1-zs21", r"=\frac{1055}{32}\ze(6)-\frac{69}{4}\ze^2(3)+32\ze(\bar5,1)",
               "binom:1 denom:n^2 f:t(1) f:z*(2,1)",
               _closed("1055/32 zeta(6) - 69/4 zeta(3)^2 + 32 zeta(5~,1) - 62 zeta(5) log 2"
                       " + 28 zeta(2) zeta(3) log 2 - 16 zeta(2) zeta(3~,1)",
                       lambda: z(6) * Fraction(1055, 32) - z(3) * z(3) * Fraction(69, 4)
                       + 32 * z(5, 1, twists=(-1, 1)) - 62 * z(5) * l2()
                       + 28 * z(2) * z(3) * l2() - 16 * z(2) * z(3, 1, twists=(-1, 1)),
                       terms=16))
    # p = 0 case: inverse-binomial series equal 2^{|k|+1} t((1, k reversed)^dual)
    for k in ((1,), (2,), (3,), (1, 1), (2, 1), (1, 2)):
        dual = hoffman_dual(Composition((1,) + tuple(reversed(k))))
        spec = f"binom:-1 denom:n^{k[0] + 1}" + _f("z", k[1:], -1)
        kk = ",".join(map(str, k))
        _pairwise(f"chen-dual-{kk.replace(',', '')}",
                  r"=2^{|\bfk|+1} t((1,k_r,k_{r-1},\ldots,k_1)^\vee)\nonumber",
                  _series_side(spec),
                  _mtv_combo(f"2^{sum(k) + 1} t({dual})", [(2 ** (sum(k) + 1), dual.parts,
                                                          (1,) * dual.depth)]),
                  TOL_SERIES)


# ======================================== polylog integrals by quadrature

def _mp_li(k: tuple, x: mpmath.mpf, cx: mpmath.mpf) -> mpmath.mpf:
    """``Li_k(x)`` for depth <= 2 and weight <= 3 through classical polylogarithms."""
    if len(k) == 1:
        if k[0] == 1:
            return -mpmath.log(cx)
        return mpmath.polylog(k[0], x)
    if k == (1, 1):
        return mpmath.log(cx) ** 2 / 2
    # Nielsen S_{1,2}(x) = Li_{2,1}(x)
    s12 = (mpmath.zeta(3) - mpmath.polylog(3, cx) + mpmath.log(cx) * mpmath.polylog(2, cx)
           + mpmath.log(x) * mpmath.log(cx) ** 2 / 2)
    if k == (2, 1):
        return s12
    if k == (1, 2):
        # integrate Li_2(t)/(1-t) by parts
        return -mpmath.log(cx) * mpmath.polylog(2, x) - 2 * s12
    raise ValueError(f"no classical formula for Li_{k}")


@lru_cache(maxsize=64)
def _li_nodes(k: tuple, tags: str):
    """``Li_k`` at the nodes of the rule and its halved version."""
    rule = legendre.rule_from_tags(tags, levels=40)
    out = []
    for r in (rule, rule.halved()):
        with mpmath.workdps(36):
            vals = [_mp_li(k, _mp(x), _mp(c)) for x, c in zip(r.nodes, r.complement)]
        out.append((r, XReal.array([_xmp(v) for v in vals])))
    return tuple(out)


def _quad_with_li(k: tuple, tags: str, g: Callable) -> tuple:
    """``int g(x, 1-x) Li_k(x) dx`` on the tagged rule (and its halved version)."""
    (r1, l1), (r2, l2) = _li_nodes(k, tags)
    coarse = (r1.weights * g(r1.nodes, r1.complement) * l1).sum()
    terms = r2.weights * g(r2.nodes, r2.complement) * l2
    fine = terms.sum()
    floor = 16 * EPS * float(abs(terms.hi).sum())
    return fine, max(abs(float(fine - coarse)), floor)


def _xn_li_formula(n: int, k: tuple) -> XReal:
    r = len(k)
    zs = lambda comp: Fraction(sums.zeta_star_n(comp, n))  # noqa: E731
    tot = XReal.from_fraction(Fraction((-1) ** (sum(k) - r), n ** k[0]) * zs(k[1:] + (1,)))
    for j in range(k[0] - 1):
        tot = tot + _zeta(k[0] - j, *k[1:]) * Fraction((-1) ** j, n ** (j + 1))
    for l in range(1, r):
        sgn = (-1) ** (sum(k[:l]) - l)
        for j in range(k[l] - 1):
            c = Fraction(sgn * (-1) ** j, n ** k[0]) * zs(k[1:l] + (j + 1,))
            tot = tot + _zeta(k[l] - j, *k[l + 1:]) * c
    return tot


def _reg_polylog_integrals():
    for k in ((1,), (2,), (3,), (1, 1), (2, 1), (1, 2)):
        kk = "".join(map(str, k))
        dual = hoffman_dual(Composition((1,) + tuple(reversed(k))))

        def lhs(ctx, k=k):
            return _quad_with_li(k, "sqrt-upper",
                                 lambda x, cx: 1 / (x * xprec.sqrt(cx)))
        _pairwise(f"mpl-half-{kk}",
                  r"\int_0^1 \frac{\Li_{\bfk}(t)}{t\sqrt{1-t}}dt=2^{|\bfk|+1}t((1,k_r,k_{r-1},\ldots,k_1)^\vee)",
                  Side(f"int_0^1 Li_{k}(t) dt/(t sqrt(1-t))", "quadrature with classical polylogs", lhs),
                  _mtv_combo(f"2^{sum(k) + 1} t({dual})",
                             [(2 ** (sum(k) + 1), dual.parts, (1,) * dual.depth)]),
                  TOL_SERIES)
        for n in range(1, 6):
            def lhs_n(ctx, k=k, n=n):
                return _quad_with_li(k, "none", lambda x, cx: x ** (n - 1))
            _pairwise(f"xn-li-{kk}-n{n}",
                      r"\int\limits_0^1 {x^{n-1}{\rm Li}_{\bfk}(x)dx}",
                      Side(f"int_0^1 x^{n - 1} Li_{k}(x) dx", "quadrature with classical polylogs",
                           lhs_n),
                      _closed("harmonic star sums and MZVs", lambda k=k, n=n: _xn_li_formula(n, k)),
                      TOL_SERIES)


# ====================================== level-4 iterated-integral equalities

_L = {
    "a": {"0": 1},
    "x0": {"0": -1},
    "x1": {"1": 1},
    "xm1": {"-1": 1},
    "xi": {"i": 1},
    "xmi": {"-i": 1},
    "y": {"-i": 1, "i": 1, "-1": -1, "1": -1},
    "z": {"0": -1, "i": -1, "-i": -1},
    "b": {"-i": 1, "i": -1},
    "c": {"-1": 1, "1": -1},
}


def _word_value(lc: LinComb) -> tuple:
    tot, err = XComplex(0.0, 0.0), 0.0
    for w, c in lc.items():
        v, e = _ii([_L[a] for a in w])
        tot = tot + v * XComplex.from_gauss(GaussQ.coerce(c))
        err += e * abs(complex(GaussQ.coerce(c)))
    return tot, err


def _cside(text: str, fn: Callable[[], tuple], part: str, scale=None) -> Side:
    def ev(ctx):
        v, e = fn()
        v = v.re if part == "re" else v.im
        if scale is not None:
            s = scale()
            v = v * s
            e = e * abs(float(s))
        return v, e
    return Side(text, "level-4 iterated integrals", ev)


def _li_sum(terms) -> Callable[[], tuple]:
    """``sum c Li_k(args)`` with Gaussian-rational coefficients."""
    def fn():
        tot, err = XComplex(0.0, 0.0), 0.0
        for c, parts, args in terms:
            v = cmzv.li(parts, args)
            tot = tot + v * XComplex.from_gauss(GaussQ.coerce(c))
            err += 64 * EPS * abs(complex(GaussQ.coerce(c))) * max(1.0, abs(complex(v)))
        return tot, err
    return fn


def _root(z: complex) -> GaussQ:
    return GaussQ(Fraction(int(round(z.real))), Fraction(int(round(z.imag))))


def _reg_level4():
    pi, G = _pi, _G
    I = GaussQ(0, 1)
    # Li_k((1+-i)/2) as a word in x_1 and x_{+-i}
    for k in ((2,), (3,), (2, 1)):
        kk = "".join(map(str, k))
        for conj in (False, True):
            pole = "-i" if conj else "i"
            arg = GaussQ(Fraction(1, 2), Fraction(-1, 2) if conj else Fraction(1, 2))
            word = []
            for kj in k:
                word += ["1"] * (kj - 1) + [pole]
            sign = (-1) ** len(k)

            def rhs_fn(word=tuple(word), sign=sign):
                v, e = _ii(word)
                return v * sign, e
            for part in ("re", "im"):
                _pairwise(f"li-half-{kk}{'-conj' if conj else ''}-{part}",
                          r"=(-1)^r \int_0^{1}\left(\frac{dt}{1-t}\right)^{k_1-1} \frac{dt}{i-t}",
                          _cside(f"{part} Li_{k}({arg})", lambda k=k, arg=arg: (cmzv.li(k, (arg,) + (1,) * (len(k) - 1)), 0.0), part),
                          _cside(f"{part} (-1)^r I(0; {' '.join(word)}; 1)", rhs_fn, part),
                          TOL_IDENTITY)
    # 2^d t(s; -1, 1..) = i sum eta_1..eta_d Li_s(i eta_1, eta_2, ..)
    for s in ((2,), (3,), (2, 1), (2, 2), (3, 1)):
        d = len(s)
        terms = []
        for etas in product((1, -1), repeat=d):
            c = I * math.prod(etas)
            args = (_root(1j * etas[0]),) + tuple(_root(e) for e in etas[1:])
            terms.append((c, s, args))
        _pairwise(f"mtv-cmzv-{''.join(map(str, s))}",
                  r"2^d t(\bfs;-1,1_{d-1})=i\sum_{\eta_1=\pm 1}\cdots \sum_{\eta_d=\pm 1} \eta_1\cdots \eta_d \Li_\bfs(i\eta_1,\eta_2,\dots, \eta_d)",
                  Side(f"2^{d} t({s}; -1, 1..)", "MtV iterated integral",
                       lambda ctx, s=s, d=d: (_tval(*s, twists=(-1,) + (1,) * (d - 1)) * 2 ** d,
                                              64 * EPS * 2 ** d)),
                  _cside("i sum eta Li_s(i eta_1, eta_2, ..)", _li_sum(terms), "re"),
                  TOL_IDENTITY)
    # 4G/pi through Li_{1,1}
    li11 = [(1, (1, 1), (I, I)), (1, (1, 1), (-I, I)), (-1, (1, 1), (I, -I)), (-1, (1, 1), (-I, -I))]
    _pairwise("ii-4gi-li11", r"=\frac{2i}{\pi}\big(\Li_{1,1}(i,i)+\Li_{1,1}(-i,i)-\Li_{1,1}(i,-i)-\Li_{1,1}(-i,-i)\big)=\frac{4G}{\pi}",
              _cside("Re 2i/pi (Li11(i,i) + Li11(-i,i) - Li11(i,-i) - Li11(-i,-i))",
                     _li_sum([(c * I * 2, p, a) for c, p, a in li11]), "re", lambda: 1 / pi()),
              _closed("4G/pi", lambda: 4 * G() / pi()), TOL_IDENTITY)
    _pairwise("ii-4gi-word", r"\frac{2 i}{\pi} \int_0^1(\tx_{-1}-\tx_{1}) (\tx_{-i}-\tx_{i})",
              _cside("Re 2i/pi I(c b)", lambda: _word_value(LinComb({("c", "b"): 2 * I})), "re",
                     lambda: 1 / pi()),
              _cside("Re 2i/pi (Li11(i,i) + Li11(-i,i) - Li11(i,-i) - Li11(-i,-i))",
                     _li_sum([(c * I * 2, p, a) for c, p, a in li11]), "re", lambda: 1 / pi()),
              TOL_IDENTITY)
    # first-power t_n(1)/(2n+1): word form against 4(G + Im Li_{1,1}(-i, i))
    w1 = LinComb({("b", "a"): I * -1, ("x1", "b"): I, ("xm1", "b"): I})
    _pairwise("ii-first-power-t1-m1",
              r"=4\big(G+{\rm Im}\Li_{1,1}(-i,i))\big) \approx 1.088793045",
              _cside("Re i(-1) I(b a - (x_1 + x_-1) b)", lambda: _word_value(w1), "re"),
              Side("4 (G + Im Li11(-i, i))", "CMZV",
                   lambda ctx: ((G() + cmzv.li((1, 1), (-I, I)).im) * 4, 256 * EPS)),
              TOL_IDENTITY)
    # squared inverse binomial, p = k = m = 1: shuffle word against the Li_{2,1,1}, Li_{1,1,1,1} sum
    b2 = LinComb({("b", "b"): 1})
    sh = words.shuffle(b2, LinComb({("z",): 1}))
    word = LinComb()
    for w, c in sh.items():
        word.add_term(("c",) + tuple(w), c * -8)
    terms = []
    for e1, e2 in product((I, -I), repeat=2):
        for e3 in (1, -1):
            c = (-e1) / (e2 * e3) * 8
            args = (1 / e1, e1 / e2, e2 / GaussQ.coerce(e3))
            for parts in ((2, 1, 1), (1, 2, 1), (1, 1, 2)):
                terms.append((c, parts, args))
    for e1, e2, e3 in product((I, -I), repeat=3):
        for e4 in (1, -1):
            c = (e2 / e3 + e1 / e3 + e1 / e2) * GaussQ.coerce(e4) * -8
            args = (1 / e1, e1 / e2, e2 / e3, e3 / GaussQ.coerce(e4))
            terms.append((c, (1, 1, 1, 1), args))
    _pairwise("ii-sq-inv-t1-n3",
              r"\approx 7.7112698415",
              _cside("-8 I(c (b^2 sh z))", lambda: _word_value(word), "re"),
              _cside("8 sum (-eta1/(eta2 eta3)) Li_{2,1,1}.. - 8 sum eta4 (..) Li_{1,1,1,1}(..)",
                     _li_sum(terms), "re"),
              TOL_IDENTITY)
    # t(m+2, 2_p) as an iterated integral of dt/sqrt(1-t^2) and dt/t
    for m in (0, 1):
        for p in (0, 1):
            src = ("dt/sqrt(1-t^2)",) * (2 * p + 1) + ("0",) * m + ("dt/sqrt(1-t^2)",)
            pulled = words.substitute(src, "T3", normalize=True)

            def rhs_fn(pulled=pulled):
                return _ii_lincomb(pulled)
            comp = (m + 2,) + (2,) * p
            _pairwise(f"mtv-222-m{m}-p{p}",
                      r"t(m+2,2_p)=\int_0^1 \left(\frac{dt}{\sqrt{1-t^2}}\right)^{2p+1} \left(\frac{dt}{t}\right)^{m}\frac{dt}{\sqrt{1-t^2}}",
                      Side(f"t{comp}", "MtV iterated integral",
                           lambda ctx, comp=comp: (_tval(*comp), 64 * EPS)),
                      _cside("pullback through t -> (1-t^2)/(1+t^2)", rhs_fn, "re"),
                      TOL_IDENTITY)
    for p in (0, 1):
        def lhs(ctx, p=p):
            c = Fraction(1, math.factorial(2 * p + 1))

            def f(x, cx):
                s = xprec.atan2(x, xprec.sqrt(cx * (2 - cx)))
                return s ** (2 * p + 1) * (_pi() / 2 - s) / x
            v, e = legendre.integrate(f, "sqrt-upper", with_error=True, complement=True)
            return v * XReal.from_fraction(c), e * float(c)
        comp = (3,) + (2,) * p
        _pairwise(f"mtv-3-2p-arcsin-p{p}",
                  r"=\frac{1}{(2p+1)!}\int_0^1  \frac{(\arcsin t)^{2p+1} \arccos t\, dt}{t}",
                  Side(f"1/{2 * p + 1}! int asin^{2 * p + 1} acos / t", "quadrature", lhs),
                  Side(f"t{comp}", "MtV iterated integral",
                       lambda ctx, comp=comp: (_tval(*comp), 64 * EPS)),
                  TOL_IDENTITY)


# ====================================== polylog-star lemma at x = 1/2

_SQRT_HALF = Fraction(round(mpmath.sqrt(mpmath.mpf(1) / 2) * 10 ** 50), 10 ** 50)


def _half_lhs(k: int, m: int, p: int, ctx) -> tuple:
    """``sum_n a_n t_n(1_p)/n^{m+1} (Li_k(1/2) - zeta*_n(k; 1/2))`` summed directly."""
    with mpmath.workdps(40):
        x = mpmath.mpf(1) / 2
        N = 260
        tail = [mpmath.mpf(0)] * (N + 2)
        for j in range(N + 1, 0, -1):
            tail[j - 1] = tail[j] + x ** j / mpmath.mpf(j) ** k
        tot = mpmath.mpf(0)
        for n in range(1, N):
            a = sums.central_binomial(n) * sums.t_n((1,) * p, n) / Fraction(n) ** (m + 1)
            tot += mpmath.mpf(a.numerator) / a.denominator * tail[n]
        return _xmp(tot), 1e-30


def _half_rhs(k: int, m: int, p: int) -> tuple:
    s = {"1": 1, "-1": 1}
    chi = {"1": 1, "-1": -1} if p else {"-1": -2}
    w = [s] * (k - 1) + ["0"] + [s] * m + [chi] + ["0"] * p
    v = cmzv.iterint(tuple(w), lower=_SQRT_HALF)
    return v.re * 2, 256 * EPS * max(1.0, abs(float(v.re)))


def _reg_half_lemma():
    for k in (1, 2):
        for m in (0, 1):
            for p in (0, 1):
                _pairwise(f"half-lemma-k{k}-m{m}-p{p}",
                          r"= 2^r\int_{\sqrt{1-x}}^1 \left( \frac{2tdt}{1-t^2}\right)^{k_r-1}\frac{dt}{t}",
                          Side(f"sum a_n t_n(1_{p})/n^{m + 1} (Li_{k}(1/2) - zeta*_n({k}; 1/2))",
                               "direct geometric summation",
                               lambda ctx, k=k, m=m, p=p: _half_lhs(k, m, p, ctx)),
                          Side("2 I(sqrt(1/2); ...; 1)", "iterated integral from sqrt(1/2)",
                               lambda ctx, k=k, m=m, p=p: _half_rhs(k, m, p)),
                          TOL_IDENTITY)


# ================================================== printed decimals

_DECIMALS = [
    ("dec-lin-odd-t1", "binom:1 denom:2n1^1 f:t(1)", "1.088793045", r"\approx 1.088793045"),
    ("dec-lin-odd2-t1", "binom:1 denom:2n1^2 f:t(1)", "0.108729731954", r"&\, \approx 0.108729731954."),
    ("dec-lin-odd-t2", "binom:1 denom:2n1^1 f:t(2)", "0.6459640977", r"\approx 0.6459640977"),
    ("dec-lin-odd2-t2", "binom:1 denom:2n1^2 f:t(2)", "0.0937132114", r"\approx 0.0937132114"),
    ("dec-inv-t2", "binom:-1 denom:n^2 f:t(2)", "5.4641926215", r"\approx 5.4641926215"),
    ("dec-inv-z2-t2", "binom:-1 denom:n^2 f:z(2)@-1 f:t(2)", "4.822651414", r"\approx  4.822651414"),
    ("dec-sqinv-t1-n3", "binom:-2 denom:n^3 f:t(1)", "7.7112698415", r"\approx 7.7112698415"),
    ("dec-sqinv-z2-t1-n3", "binom:-2 denom:n^3 f:z(2)@-1 f:t(1)", "4.8416943704",
     r"\approx 4.8416943704"),
    ("dec-sqinv-z22-t1-n3", "binom:-2 denom:n^3 f:z(2,2)@-1 f:t(1)", "1.3105783945",
     r"\approx 1.3105783945"),
    ("dec-sq-odd-t2", "binom:2 denom:2n1^1 f:t(2)", "0.179386942", r"\approx 0.179386942"),
    ("dec-sq-odd-t22", "binom:2 denom:2n1^1 f:t(2,2)", "0.0139754925", r"\approx  0.0139754925"),
    ("dec-sqinv-t1-n4", "binom:-2 denom:n^4 f:t(1)", "5.0319188594", r"\approx 5.0319188594"),
    ("dec-sqinv-z2-t1-n4", "binom:-2 denom:n^4 f:z(2)@-1 f:t(1)", "1.1896632248",
     r"\approx 1.1896632248"),
    ("dec-sq-odd2", "binom:2 denom:2n1^2", "1.037947765", r"\approx  1.037947765"),
    ("dec-sq-odd2-t2", "binom:2 denom:2n1^2 f:t(2)", "0.0393547288", r"\approx  0.0393547288"),
    ("dec-sq-odd", "binom:2 denom:2n1^1", "1.166243616", r"\approx 1.166243616"),
]


def _reg_decimals():
    for ident, spec, dec, anchor in _DECIMALS:
        _two_route(ident, anchor, spec, _decimal(dec), tol=TOL_PRINTED, relative=True)
    _pairwise("const-g4", r"G(4):=\sum_{n=0}^\infty \frac{(-1)^n}{(2n+1)^4}",
              Side("G(4) = Im Li4(i)", "CMZV", lambda ctx: (_beta4(), 64 * EPS)),
              Side("(zeta(4, 1/4) - zeta(4, 3/4))/256", "Hurwitz zeta",
                   lambda ctx: (_xmp(_hurwitz_beta4()), 1e-30)),
              TOL_CONST, note="registered as a constant only")


def _hurwitz_beta4():
    with mpmath.workdps(40):
        return (mpmath.zeta(4, mpmath.mpf(1) / 4) - mpmath.zeta(4, mpmath.mpf(3) / 4)) / 256


# ========================================================= constants

TOL_CONSTANT_REF = 1e-24


def _mp_ref(text: str, fn: Callable) -> Side:
    def ev(ctx):
        with mpmath.workdps(45):
            return _xmp(fn()), 1e-32
    return Side(text, "mpmath at 45 digits", ev)


def _const_side(text: str, fn: Callable[[], XReal]) -> Side:
    return Side(text, "iterated integral (Hoelder split at 1/2)",
                lambda ctx: (xr(fn()), 16 * EPS * max(1.0, abs(float(fn())))))


def _reg_constants():
    rows = [
        ("const-zeta2", r"\ze(2)", "zeta(2)", lambda: _zeta(2), lambda: mpmath.zeta(2)),
        ("const-zeta3", r"\ze(3)", "zeta(3)", lambda: _zeta(3), lambda: mpmath.zeta(3)),
        ("const-zeta2bar", r"\ze(\bar l)", "zeta(2~) = -pi^2/12",
         lambda: _zeta(2, twists=(-1,)), lambda: -mpmath.pi ** 2 / 12),
        ("const-t2", r"t(2)", "t(2) = pi^2/8", lambda: _tval(2), lambda: mpmath.pi ** 2 / 8),
        ("const-t2bar", r"t(\bar 2)", "t(2~) = -G",
         lambda: _tval(2, twists=(-1,)), lambda: -mpmath.catalan),
        ("const-log2", r"\log 2", "log 2 = -zeta(1~)",
         lambda: -cmzv.cmzv(_tc((1,), (-1,))).re, lambda: mpmath.log(2)),
    ]
    for ident, anchor, text, ours, ref in rows:
        _pairwise(ident, anchor, _const_side(text, ours), _mp_ref(text, ref), TOL_CONSTANT_REF)
    for parts, args, name in (((2,), (1,), "zeta2"), ((3,), (1,), "zeta3"), ((2,), (-1,), "zeta2bar"),
                              ((2, 1, 1), (1, -1, 1j), "mixed")):
        word = words.mpl_word(parts, args)
        def split_a(ctx, word=word):
            v = cmzv.iterint(word, split=[Fraction(1, 2)])
            return v.re, 4 * EPS
        def split_b(ctx, word=word):
            v = cmzv.iterint(word, split=[Fraction(1, 3), Fraction(2, 3)])
            return v.re, 4 * EPS
        _pairwise(f"const-split-{name}", r"\ze(2)",
                  Side(f"I({word}) split at 1/2", "iterated integral", split_a),
                  Side(f"I({word}) split at 1/3, 2/3", "iterated integral", split_b),
                  TOL_CONSTANT_REF, note="the path split must not change the value")


# ============================================ quadrature-vs-formula suites

def _quad_side(text, f, tags, complement=True) -> Side:
    def ev(ctx):
        return legendre.integrate(f, tags, with_error=True, complement=complement)
    return Side(text, f"quadrature [{tags}]", ev)


def _exact_side(text, fn) -> Side:
    def ev(ctx):
        q = Fraction(fn())
        return XReal.from_fraction(q), 2 * EPS * abs(float(q))
    return Side(text, "exact rational", ev)


def _reg_quadrature():
    for n in range(1, 7):
        for m in range(1, 5):
            # reflected: int (1-x)^{n-1} log^m x dx
            _pairwise(f"quad-xn-log1mx-n{n}-m{m}",
                      r"\int_0^1 x^{n-1}\log^m(1-x)dx",
                      _quad_side(f"int x^{n - 1} log^{m}(1-x)",
                                 lambda x, cx, n=n, m=m: cx ** (n - 1) * xprec.log(x) ** m,
                                 "log-lower"),
                      _exact_side(f"(-1)^{m} {m}! zeta*_{n}(1_{m})/{n}",
                                  lambda n=n, m=m: Fraction((-1) ** m * math.factorial(m), n)
                                  * sums.zeta_star_n((1,) * m, n)),
                      TOL_QUAD)
    for n in range(1, 7):
        for k in range(1, 5):
            _pairwise(f"quad-nk-log-sqrt-n{n}-k{k}",
                      r"\int_0^1 x^{n-1}\frac{\log^k(1-x)}{\sqrt{1-x}}dx=(-1)^kk!2^k \frac{4^n}{n\binn}t_n^\star(1_k)",
                      _quad_side(f"int x^{n - 1} log^{k}(1-x)/sqrt(1-x)",
                                 lambda x, cx, n=n, k=k: cx ** (n - 1) * xprec.log(x) ** k
                                 / xprec.sqrt(x), "sqrt-lower"),
                      _exact_side(f"(-1)^{k} {k}! 2^{k} 4^{n}/({n} C({2 * n},{n})) t*_{n}(1_{k})",
                                  lambda n=n, k=k: Fraction((-1) ** k * math.factorial(k) * 2 ** k)
                                  / (n * sums.central_binomial(n)) * sums.t_star_n((1,) * k, n)),
                      TOL_QUAD)
    for n in range(1, 11):
        for m in range(1, 5):
            _pairwise(f"quad-fl-logm-n{n}-m{m}",
                      r"\int\limits_{0}^1 P_n(2x-1)\log^m(1-x)dx",
                      _quad_side(f"int P_{n}(2x-1) log^{m} x",
                                 lambda x, cx, n=n, m=m: legendre.legendre_P(n, 2 * x - 1)
                                 * xprec.log(x) ** m, "log-lower"),
                      _exact_side(f"FL coefficient formula (n={n}, m={m})",
                                  lambda n=n, m=m: legendre.fl_coeff_logm(n, m, exact=True)),
                      TOL_QUAD)
    for n in range(0, 11):
        for m in range(0, 5):
            _pairwise(f"quad-fl-logm-sqrt-n{n}-m{m}",
                      r"\frac{\log^m(x)}{\sqrt{x}}",
                      _quad_side(f"int P_{n}(2x-1) log^{m} x / sqrt x",
                                 lambda x, cx, n=n, m=m: legendre.legendre_P(n, 2 * x - 1)
                                 * xprec.log(x) ** m / xprec.sqrt(x), "sqrt-lower"),
                      _exact_side(f"FL coefficient formula (n={n}, m={m})",
                                  lambda n=n, m=m: legendre.fl_coeff_logm_sqrt(n, m, exact=True)),
                      TOL_QUAD)
    for n in range(0, 6):
        for k in range(0, 4):
            def closed(ctx, n=n, k=k):
                v = legendre.beta_deriv_b_closed(n, k)
                return v, 256 * EPS * max(1.0, abs(float(v)))
            _pairwise(f"quad-beta-deriv-n{n}-k{k}",
                      r"=\frac{(-1)^k k! \pi\binn}{4^{n}}\sum\limits_{j=0}^{k} b_j \ze_{n}^{\star}(1_{k-j})",
                      _quad_side(f"int x^({n}-1/2) (1-x)^(-1/2) log^{k}(1-x)",
                                 lambda x, cx, n=n, k=k: x ** n / xprec.sqrt(x) / xprec.sqrt(cx)
                                 * xprec.log(cx) ** k, "sqrt-lower,sqrt-upper"),
                      Side("b_j recursion with zeta*_n(1_j)", "closed form", closed),
                      TOL_QUAD)


# ====================================================== exact checks

def _exact(ident, anchor, text, check, note=""):
    register(Identity(ident, anchor, Side(text, "exact arithmetic"), Side("exact", "exact"),
                      0.0, kind="exact-symbolic", check=check, note=note))


def _check_dual():
    bad = []
    n = 0
    for c in all_compositions(12):
        n += 1
        d = hoffman_dual(c)
        if hoffman_dual(d) != c or d.weight != c.weight:
            bad.append(str(c))
    if tuple(hoffman_dual(Composition((1, 1, 2, 1))).parts) != (3, 2):
        bad.append("(1,1,2,1)")
    return n + 1, bad


def _check_word_lemma():
    bad = []
    for m in range(0, 7):
        lhs, rhs = words.hoffman_word_lemma_sides(m)
        if lhs != rhs:
            bad.append(m)
    return 7, bad


def _random_word(rng, max_weight):
    w = rng.randint(1, max_weight)
    parts = []
    while w:
        k = rng.randint(1, w)
        parts.append(k)
        w -= k
    return tuple(parts)


def _check_algebra_axioms():
    rng = random.Random(20240601)
    bad = []
    letters = ["0", "1", "-1", "i", "-i"]
    for case in range(200):
        u, v, w = (_random_word(rng, 3) for _ in range(3))
        if words.stuffle(u, v) != words.stuffle(v, u):
            bad.append(("stuffle-comm", u, v))
        left = words.stuffle_lincomb(words.stuffle(u, v), words.stuffle(w, ()))
        right = words.stuffle_lincomb(words.stuffle(u, ()), words.stuffle(v, w))
        if left != right:
            bad.append(("stuffle-assoc", u, v, w))
        a = tuple(rng.choice(letters) for _ in range(rng.randint(0, 3)))
        b = tuple(rng.choice(letters) for _ in range(rng.randint(0, 3)))
        c = tuple(rng.choice(letters) for _ in range(rng.randint(0, 2)))
        ab = words.shuffle(a, b)
        if ab != words.shuffle(b, a):
            bad.append(("shuffle-comm", a, b))
        if sum(ab.values()) != math.comb(len(a) + len(b), len(a)):
            bad.append(("shuffle-count", a, b))
        if words.shuffle(ab, LinComb.single(c)) != words.shuffle(LinComb.single(a),
                                                                  words.shuffle(b, c)):
            bad.append(("shuffle-assoc", a, b, c))
    return 200, bad


def _check_ab():
    rng = random.Random(7)
    bad = []
    cases = 0
    for barred in (False, True):
        for m in range(1, 7):
            for n in (1, 5, 12, 25):
                xs = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n)]
                A, B = sums.AB_sequences(xs, m, n, barred=barred)
                cases += 1
                if A != math.factorial(m) * B:
                    bad.append((barred, m, n))
    return cases, bad


def _check_star_inversion():
    bad = []
    cases = 0
    for c in all_compositions(8):
        cases += 1
        if words.star_roundtrip(c) != LinComb.single(c):
            bad.append(str(c))
        for kind, star in (("z", "z*"), ("t", "t*")):
            n = 9
            direct = sums.finite_sum(star, c, n)
            via = sum((coef * sums.finite_sum(kind, key, n)
                       for key, coef in words.star_expand(c, "star_in_nonstar").items()), Fraction(0))
            if direct != via:
                bad.append((kind, str(c)))
            back = sum((coef * sums.finite_sum(star, key, n)
                        for key, coef in words.star_expand(c, "nonstar_in_star").items()), Fraction(0))
            if back != sums.finite_sum(kind, c, n):
                bad.append((star, str(c)))
    return cases, bad


def _check_star1s():
    bad = []
    cases = 0
    for m in range(1, 9):
        for n in range(1, 31):
            cases += 1
            lhs = sum((sums.zeta_star_n((1,) * (m - i), n) * sums.zeta_n((i,), n)
                       for i in range(1, m + 1)), Fraction(0))
            if lhs != m * sums.zeta_star_n((1,) * m, n):
                bad.append((m, n))
    return cases, bad


def _check_parity_doubling():
    bad = []
    cases = 0
    for c in all_compositions(6):
        if c.depth > 3:
            continue
        for n in range(1, 16):
            cases += 1
            if sums.doubled_parity_sum(c, n) != sums.zeta_n(c, n):
                bad.append((str(c), n))
    return cases, bad


def _inv_binomial_series(c0, c1, e: int, order: int) -> list:
    """Taylor coefficients of ``(c0 + c1 u)^{-e}`` up to ``u^{order-1}``."""
    c0, c1 = Fraction(c0), Fraction(c1)
    return [math.comb(e + j - 1, j) * (-c1) ** j / c0 ** (e + j) for j in range(order)]


def _mul_series(a: list, b: list) -> list:
    out = [Fraction(0)] * len(a)
    for i, x in enumerate(a):
        for j, y in enumerate(b[: len(a) - i]):
            out[i + j] += x * y
    return out


def _laurent(p: int, q: int):
    """Principal parts of ``1/(n^p (n+1)^q (2n+1))`` at ``n = 0`` and ``n = -1``."""
    g0 = _mul_series(_inv_binomial_series(1, 1, q, p), _inv_binomial_series(1, 2, 1, p))
    g1 = _mul_series(_inv_binomial_series(-1, 1, p, q), _inv_binomial_series(-1, 2, 1, q))
    return ({i: g0[p - i] for i in range(1, p + 1)},
            {j: g1[q - j] for j in range(1, q + 1)})


def _check_partial_fractions():
    rng = random.Random(3)
    bad = []
    cases = 0
    for p in range(1, 5):
        for q in range(1, 5):
            A, B = _laurent(p, q)
            c, d = A[1], -B[1]
            for _ in range(5):
                n = Fraction(rng.randint(1, 400), rng.choice((1, 1, 3, 7)))
                cases += 1
                lhs = 1 / (n ** p * (n + 1) ** q * (2 * n + 1))
                rhs = sum((A[i] / n ** i for i in range(2, p + 1)), Fraction(0)) \
                    + sum((B[j] / (n + 1) ** j for j in range(2, q + 1)), Fraction(0)) \
                    + c / (n * (2 * n + 1)) + d / ((n + 1) * (2 * n + 1))
                if lhs != rhs:
                    bad.append((p, q, n))
    return cases, bad


def _check_stuffle_homomorphism():
    rng = random.Random(11)
    bad = []
    cases = 0
    for _ in range(60):
        u = _random_word(rng, 3)
        v = _random_word(rng, 5 - sum(u) if sum(u) < 5 else 1)
        n = rng.randint(1, 40)
        for kind in ("z", "t"):
            cases += 1
            lhs = sums.finite_sum(kind, Composition(u), n) * sums.finite_sum(kind, Composition(v), n)
            rhs = sums.eval_words(words.stuffle(u, v), n, kind)
            if lhs != rhs:
                bad.append((kind, u, v, n))
    # twisted words at level 2
    for _ in range(30):
        u = tuple((k, rng.choice((1, -1))) for k in _random_word(rng, 2))
        v = tuple((k, rng.choice((1, -1))) for k in _random_word(rng, 3))
        n = rng.randint(1, 40)
        cases += 1
        tu = TwistedComposition(tuple(k for k, _ in u), tuple(s for _, s in u))
        tv = TwistedComposition(tuple(k for k, _ in v), tuple(s for _, s in v))
        lhs = sums.finite_sum("z", tu, n) * sums.finite_sum("z", tv, n)
        if lhs != sums.eval_words(words.stuffle(u, v), n, "z"):
            bad.append(("twisted", u, v, n))
    return cases, bad


def _reg_exact():
    _exact("dual-involution", r"({1,1,2,1})^\vee=(3,2)",
           "Hoffman dual is an involution on all compositions of weight <= 12", _check_dual)
    _exact("words-lemma", r"Hoffman's $\Q$-algebra of words",
           "sum_k sum_{|r|=k} z_1^{m-k} * z_r = sum_{|s|=m} 2^dep(s) z_s for m <= 6",
           _check_word_lemma)
    _exact("algebra-axioms", r"satisfy stuffle relations",
           "stuffle/shuffle commutativity, associativity and term counts, 200 random cases",
           _check_algebra_axioms)
    _exact("ab-sequences", r"A_m(n) = m!B_m(n)",
           "A_m(n) = m! B_m(n) and the barred variant for m <= 6, n <= 25",
           _check_ab)
    _exact("star-inversion", r"t_n^\star(\bfk)=\sum_{\circ=\text{``,'' or ``+''}}   t_n (k_1\circ \cdots\circ k_r)",
           "star <-> non-star expansions invert each other and agree on finite sums, weight <= 8",
           _check_star_inversion)
    _exact("star1s", r"\sum\limits_{i=1}^{m}\ze_{n}^{\star}(1_{m-i}) \ze_{n}(i) =m  \ze_{n}^{\star}(1_{m})",
           "sum_i zeta*_n(1_{m-i}) zeta_n(i) = m zeta*_n(1_m) for m <= 8, n <= 30", _check_star1s)
    _exact("parity-doubling", r"\ze_{2n}(s_1,\ldots,s_m;\si_1,\dots,\si_m)\,.",
           "zeta_n(s) = 2^{|s|-r} sum_sigma zeta_2n(s; sigma), depth <= 3, n <= 15",
           _check_parity_doubling)
    _exact("partial-fractions", r"\frac{c}{n(2n+1)}+\frac{d}{(n+1)(2n+1)}",
           "1/(n^p (n+1)^q (2n+1)) decomposition at random rational n, p, q <= 4",
           _check_partial_fractions)
    _exact("stuffle-homomorphism", r"Then both $\ze_n$ and $t_n$ satisfy stuffle relations",
           "finite sums multiply by the stuffle product, n <= 40, weight <= 5",
           _check_stuffle_homomorphism)


for _reg in (_reg_exact, _reg_squared_n1, _reg_squared_odd, _reg_first_power_r, _reg_products,
             _reg_odd_tstar, _reg_pro_mtv, _reg_corollaries, _reg_polylog_integrals, _reg_level4,
             _reg_half_lemma, _reg_decimals, _reg_constants, _reg_quadrature):
    _reg()


# ============================================================== running

@dataclass
class Record:
    id: str
    paper_ref: str
    lhs_value: str
    rhs_value: str
    abs_err: float
    rel_err: float
    tolerance: float
    verdict: str
    seconds: float
    detail: str = ""

    def as_json(self) -> dict:
        return {k: getattr(self, k) for k in ("id", "paper_ref", "lhs_value", "rhs_value",
                                              "abs_err", "rel_err", "tolerance", "verdict",
                                              "seconds")}


@dataclass
class Report:
    records: list = field(default_factory=list)
    digits: int = 32

    @property
    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "inconclusive": 0}
        for r in self.records:
            out[r.verdict] += 1
        return out

    @property
    def ok(self) -> bool:
        return self.counts["fail"] == 0

    def to_json(self) -> str:
        return json.dumps([r.as_json() for r in self.records], indent=2)

    def text(self) -> str:
        lines = []
        for r in self.records:
            lines.append(f"{r.verdict:12s} {r.id:40s} |lhs-rhs| = {r.abs_err:.2e}"
                         f"  tol {r.tolerance:.0e}  {r.seconds:6.2f}s"
                         + (f"  [{r.detail}]" if r.detail else ""))
        c = self.counts
        lines.append(f"{len(self.records)} identities: {c['pass']} pass, {c['fail']} fail, "
                     f"{c['inconclusive']} inconclusive")
        return "\n".join(lines)


def _fmt(v: XReal, digits: int) -> str:
    return v.to_decimal_string(max(digits - 2, 1))


def _evaluate(ident: Identity, ctx: Context) -> Record:
    t0 = time.perf_counter()
    if ident.kind == "exact-symbolic":
        try:
            cases, bad = ident.check()
        except Exception as exc:  # recorded, never raised
            return Record(ident.id, ident.paper_ref, "error", "exact", math.inf, math.inf, 0.0,
                          "fail", time.perf_counter() - t0, f"{type(exc).__name__}: {exc}")
        verdict = "pass" if not bad else "fail"
        detail = "" if not bad else f"mismatches: {bad[:5]}"
        return Record(ident.id, ident.paper_ref, f"{cases} cases", "exact", float(len(bad)),
                      float(len(bad)) / max(cases, 1), 0.0, verdict, time.perf_counter() - t0,
                      detail)
    try:
        lv, le = ident.lhs.evaluate(ctx)
        rv, re_ = ident.rhs.evaluate(ctx)
    except Exception as exc:
        return Record(ident.id, ident.paper_ref, "error", "error", math.inf, math.inf,
                      ident.tolerance, "fail", time.perf_counter() - t0,
                      f"{type(exc).__name__}: {exc}")
    lv, rv = xr(lv), xr(rv)
    diff = abs(float(lv - rv))
    scale = abs(float(rv))
    rel = diff / scale if scale else (0.0 if diff == 0 else math.inf)
    base = ident.tolerance if ctx.tolerance is None else ctx.tolerance
    tol = base * (scale if ident.relative else 1.0)
    combined = float(le) + float(re_)
    if diff > tol + combined:
        verdict = "fail"
    elif combined > tol:
        verdict = "inconclusive"
    elif diff <= tol:
        verdict = "pass"
    else:
        verdict = "fail"
    detail = f"combined error {combined:.1e}" if verdict == "inconclusive" else ""
    return Record(ident.id, ident.paper_ref, _fmt(lv, ctx.digits), _fmt(rv, ctx.digits), diff, rel,
                  base, verdict, time.perf_counter() - t0, detail)


def _evaluate_id(ident_id: str, ctx: Context) -> Record:
    return _evaluate(REGISTRY[ident_id], ctx)


def run(filter: str = "*", precision: int = 32, workers: int = 1,  # noqa: A002
        budget: int = 10 ** 6, tolerance: float | None = None) -> Report:
    """Evaluate all identities whose id matches the glob ``filter``.

    ``tolerance`` overrides the registered tolerance of every numeric entry;
    relative entries stay relative.
    """
    if precision < 16:
        raise ValueError("precision must be at least 16 digits")
    ctx = Context(precision, budget, tolerance)
    todo = identities(filter)
    if workers <= 1 or len(todo) <= 1:
        recs = [_evaluate(i, ctx) for i in todo]
    else:
        # mpmath keeps its precision in process-global state, so workers are processes
        mp = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=workers, mp_context=mp) as pool:
            recs = list(pool.map(_evaluate_id, [i.id for i in todo], [ctx] * len(todo),
                                 chunksize=4))
    recs.sort(key=lambda r: r.id)
    return Report(recs, precision)


def explain(ident_id: str) -> str:
    try:
        ident = REGISTRY[ident_id]
    except KeyError:
        raise RegistryError(f"unknown identity {ident_id!r}") from None
    tol = f"{ident.tolerance:.0e}" + (" (relative)" if ident.relative else "")
    lines = [
        f"id:         {ident.id}",
        f"kind:       {ident.kind}",
        f"reference:  \"{ident.paper_ref}\"",
        f"lhs:        {ident.lhs.text}",
        f"  plan:     {ident.lhs.plan}",
    ]
    if ident.kind == "numeric":
        lines += [f"rhs:        {ident.rhs.text}", f"  plan:     {ident.rhs.plan}",
                  f"tolerance:  {tol}"]
    else:
        lines.append("check:      exact equality in rational arithmetic")
    if ident.note:
        lines.append(f"note:       {ident.note}")
    return "\n".join(lines)
