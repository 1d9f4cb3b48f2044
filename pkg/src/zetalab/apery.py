"""Apery-type series with central binomial weights.

A series is described by a :class:`SeriesSpec` (or its text form, see
:func:`parse_series_spec`) and can be evaluated by two independent routes:

* :func:`eval_series` sums terms directly and extrapolates the tail with a
  least-squares fit of the known asymptotic shape
  ``N^{-s-j} log^l N``, cross-validated by doubling the number of terms;
* :func:`eval_series_integral` evaluates a registered integral
  representation, either by Gauss-Legendre quadrature or as an iterated
  integral over the level-4 alphabet through :mod:`zetalab.cmzv`.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np

from . import cmzv, legendre, xprec
from ._serieskernel import partial_sums
from .cmzv import DivergenceError
from .compositions import parse as parse_composition
from .sums import central_binomial, finite_sum
from .words import TABLES, mpl_word, shuffle
from .xprec import XComplex, XReal, xr

__all__ = [
    "Factor",
    "SeriesSpec",
    "TailModel",
    "SeriesResult",
    "SeriesSpecError",
    "TargetNotReached",
    "NoRepresentation",
    "parse_series_spec",
    "eval_series",
    "eval_series_integral",
    "find_representation",
    "REPRESENTATIONS",
    "arcsin_series",
    "f_pm",
    "f_pm_integral",
]

_KINDS = {"z": 0, "z*": 1, "t": 2, "t*": 3}
_BASES = ("n", "n1", "2n1")


class SeriesSpecError(ValueError):
    """Malformed or divergent series description."""


class NoRepresentation(LookupError):
    """No integral representation is registered for a spec."""


# ------------------------------------------------------------------ specs

@dataclass(frozen=True)
class Factor:
    kind: str
    comp: tuple[int, ...]
    offset: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise SeriesSpecError(f"unknown factor kind {self.kind!r}")
        if self.offset not in (-1, 0, 1):
            raise SeriesSpecError("factor offsets must be -1, 0 or +1")
        object.__setattr__(self, "comp", tuple(int(k) for k in self.comp))
        if any(k < 1 for k in self.comp):
            raise SeriesSpecError("composition parts must be positive")

    @property
    def ones(self) -> int:
        return sum(1 for k in self.comp if k == 1)

    def first_nonzero(self) -> int:
        """Smallest n with a nonzero factor value."""
        if not self.comp:
            return -self.offset
        need = 1 if self.kind.endswith("*") else len(self.comp)
        return need - self.offset

    def value(self, n: int) -> Fraction:
        N = n + self.offset
        if N < 0:
            return Fraction(0) if self.comp else Fraction(1)
        return finite_sum(self.kind, self.comp, N)

    def text(self) -> str:
        comp = ",".join(str(k) for k in self.comp)
        off = "" if self.offset == 0 else f"@{self.offset:+d}"
        return f"f:{self.kind}({comp}){off}"


@dataclass(frozen=True)
class SeriesSpec:
    """``sum_{n >= n0} sign_n a_n^p prod(factors) / d(n)^m`` with ``a_n = C(2n,n)/4^n``."""

    binom_power: int
    denom_base: str
    denom_exp: int
    factors: tuple[Factor, ...] = ()
    alternating: bool = False
    start: int | None = None

    def __post_init__(self):
        if self.binom_power not in (-2, -1, 0, 1, 2):
            raise SeriesSpecError("binomial power must lie in -2..2")
        if self.denom_base not in _BASES:
            raise SeriesSpecError(f"denominator base must be one of {_BASES}")
        if self.denom_exp < 1:
            raise SeriesSpecError("denominator exponent must be >= 1")
        object.__setattr__(self, "factors", tuple(self.factors))
        if self.start is not None and self.start < 0:
            raise SeriesSpecError("start index must be >= 0")
        # a_n^p ~ (pi n)^{-p/2}; harmonic factors only add logarithms
        need = 0 if self.alternating else 1
        if self.decay <= need:
            raise SeriesSpecError(
                f"series diverges: decay exponent {self.decay} must exceed {need}")

    @property
    def decay(self) -> Fraction:
        return Fraction(self.binom_power, 2) + self.denom_exp

    @property
    def n0(self) -> int:
        if self.start is not None:
            lo = self.start
        else:
            lo = max([0] + [f.first_nonzero() for f in self.factors])
        if self.denom_base == "n":
            lo = max(lo, 1)
        return lo

    @property
    def ones(self) -> int:
        return sum(f.ones for f in self.factors)

    def denominator(self, n: int) -> int:
        return (n, n + 1, 2 * n + 1)[_BASES.index(self.denom_base)]

    def term(self, n: int) -> Fraction:
        """Exact n-th term (zero below the start index)."""
        if n < self.n0:
            return Fraction(0)
        a = central_binomial(n) ** self.binom_power
        for f in self.factors:
            a *= f.value(n)
        a /= Fraction(self.denominator(n)) ** self.denom_exp
        return -a if self.alternating and n % 2 else a

    def text(self) -> str:
        out = [f"binom:{self.binom_power}", f"denom:{self.denom_base}^{self.denom_exp}"]
        if self.alternating:
            out.append("sign:alt")
        out += [f.text() for f in self.factors]
        if self.start is not None:
            out.append(f"start:{self.start}")
        return " ".join(out)

    def __str__(self) -> str:
        return self.text()


_FACTOR_RE = re.compile(r"^(z\*?|t\*?)\((.*)\)(?:@([+-]?\d+))?$")


def parse_series_spec(text: str) -> SeriesSpec:
    """Parse ``binom:<p> denom:<n|n1|2n1>^<m> [sign:alt] [f:<kind>(<comp>)[@<off>]]*``.

    ``start:<n0>`` may be appended to override the default start index.

    >>> parse_series_spec("binom:1 denom:2n1^2 f:t(1)").factors
    (Factor(kind='t', comp=(1,), offset=0),)
    """
    binom = denom = None
    alt = False
    start = None
    factors = []
    for tok in text.split():
        key, sep, val = tok.partition(":")
        if not sep or not val:
            raise SeriesSpecError(f"expected key:value, got {tok!r}")
        if key == "binom":
            try:
                binom = int(val)
            except ValueError:
                raise SeriesSpecError(f"bad binomial power {val!r}") from None
        elif key == "denom":
            base, caret, exp = val.partition("^")
            if base not in _BASES or not caret or not exp.isdigit():
                raise SeriesSpecError(f"bad denominator {val!r}")
            denom = (base, int(exp))
        elif key == "sign":
            if val != "alt":
                raise SeriesSpecError(f"bad sign {val!r}; only 'alt' is allowed")
            alt = True
        elif key == "f":
            m = _FACTOR_RE.match(val)
            if not m:
                raise SeriesSpecError(f"bad factor {val!r}")
            try:
                tc = parse_composition(m.group(2))
            except ValueError as exc:
                raise SeriesSpecError(str(exc)) from None
            if any(z != 1 for z in tc.twists):
                raise SeriesSpecError("factors take untwisted compositions")
            factors.append(Factor(m.group(1), tc.parts, int(m.group(3) or 0)))
        elif key == "start":
            if not val.isdigit():
                raise SeriesSpecError(f"bad start index {val!r}")
            start = int(val)
        else:
            raise SeriesSpecError(f"unknown key {key!r}")
    if binom is None or denom is None:
        raise SeriesSpecError("both binom: and denom: are required")
    return SeriesSpec(binom, denom[0], denom[1], tuple(factors), alt, start)


def _as_spec(spec) -> SeriesSpec:
    return parse_series_spec(spec) if isinstance(spec, str) else spec


# ------------------------------------------------------------ direct route

@dataclass
class TailModel:
    """``S_N = S + sum_{j<=J, l<=L} c_jl (N/N_max)^{-s-j} log^l N``."""

    s: Fraction
    J: int
    L: int
    window: tuple[int, int]
    coefficients: list = field(default_factory=list)
    residual: float = 0.0


@dataclass
class SeriesResult:
    value: XReal
    error: float
    terms: int
    route: str
    method: str
    tail: TailModel | None = None

    def __float__(self):
        return float(self.value)


class TargetNotReached(ArithmeticError):
    """The requested accuracy was not reached; ``result`` holds the best attempt."""

    def __init__(self, result: SeriesResult, target: float):
        self.result = result
        super().__init__(f"reached error {result.error:.3e}, target was {target:.1e}")


def _encode(spec: SeriesSpec):
    fkind, foff, fptr, fparts = [], [], [0], []
    for f in spec.factors:
        fkind.append(_KINDS[f.kind])
        foff.append(f.offset)
        fparts.extend(f.comp)
        fptr.append(len(fparts))
    return (spec.binom_power, _BASES.index(spec.denom_base), spec.denom_exp,
            spec.alternating, fkind, foff, fptr, fparts, spec.n0)


def _mpf_to_xreal(v) -> XReal:
    hi = float(v)
    return XReal(hi, float(v - hi))


_WINDOW = 8     # fit on [N/_WINDOW, N]


def _order(L: int) -> int:
    """Number of integer steps ``j`` kept; more log powers need fewer to stay well posed."""
    return {0: 6, 1: 6, 2: 4, 3: 3, 4: 2, 5: 2}.get(L, 1)


def _grid(N: int, n0: int, k: int) -> np.ndarray:
    lo = max(N // _WINDOW, n0 + 1)
    return np.unique(np.round(np.geomspace(lo, N, k)).astype(np.int64))


def _fit(ns, S, N: int, s: Fraction, L: int, J: int) -> tuple:
    with mpmath.workdps(48):
        sig = mpmath.mpf(s.numerator) / s.denominator
        rows = []
        for n in ns:
            x = mpmath.mpf(int(n)) / N
            lg = mpmath.log(x)
            row = [mpmath.mpf(1)]
            for j in range(J + 1):
                base = x ** (-sig - j)
                row += [base * lg ** l for l in range(L + 1)]
            rows.append(row)
        A = mpmath.matrix(rows)
        b = mpmath.matrix([mpmath.mpf(h) + mpmath.mpf(lo) for h, lo in S])
        sol, res = mpmath.qr_solve(A, b)
        # how strongly noise in the partial sums feeds into the constant term
        amp = float(np.abs(np.linalg.pinv(np.array(A.tolist(), dtype=float))[0]).sum())
        return sol[0], [sol[i] for i in range(1, len(sol))], float(res), amp


def _levin(spec: SeriesSpec, count: int = 60) -> tuple:
    ns = np.arange(spec.n0, spec.n0 + count, dtype=np.int64)
    ps = partial_sums(*_encode(spec), ns)
    with mpmath.workdps(48):
        L = mpmath.levin(method="levin", variant="u")
        seq = [mpmath.mpf(h) + mpmath.mpf(lo) for h, lo in ps]
        v, e = L.update_psum(seq)
        return v, float(e)


def _eval_alternating(spec: SeriesSpec, target: float) -> SeriesResult:
    n0 = spec.n0
    sign = -1 if n0 % 2 else 1

    def b(k):
        return XReal.from_fraction(abs(spec.term(n0 + k)))

    v, err = cmzv.accel_alternating(b, with_error=True)
    return SeriesResult(v * sign, err, 48, "series", "alternating")


def eval_series(spec, target_digits: int = 20, budget: int = 10 ** 6,
                use_numba: bool | None = None, full: bool = False):
    """Sum a convergent spec to ``10^-target_digits`` (absolute).

    Returns an :class:`XReal`, or a :class:`SeriesResult` when ``full``.
    Raises :class:`TargetNotReached` when the budget of terms runs out first.
    """
    spec = _as_spec(spec)
    target = 10.0 ** (-target_digits)
    if spec.alternating:
        res = _eval_alternating(spec, target)
    else:
        res = _eval_direct(spec, target, budget, use_numba)
    if res.error > target:
        raise TargetNotReached(res, target)
    return res if full else res.value


def _eval_direct(spec: SeriesSpec, target: float, budget: int, use_numba) -> SeriesResult:
    s = spec.decay - 1
    L = spec.ones
    J = _order(L)
    unknowns = 1 + (J + 1) * (L + 1)
    k = 3 * unknowns + 8
    enc = _encode(spec)
    N = max(4096, 64 * (spec.n0 + 1))
    best = None
    while True:
        g1, g2 = _grid(N, spec.n0, k), _grid(N // 2, spec.n0, k)
        ns = np.union1d(g1, g2)
        ps = partial_sums(*enc, ns, use_numba=use_numba)
        pos = {int(n): i for i, n in enumerate(ns)}
        v1, c1, r1, amp = _fit(g1, ps[[pos[int(n)] for n in g1]], N, s, L, J)
        v2, _, _, _ = _fit(g2, ps[[pos[int(n)] for n in g2]], N // 2, s, L, J)
        # rounding in the running sums grows like sqrt(N) ulps
        noise = 2 * amp * math.sqrt(N) * xprec.EPS * abs(float(v1))
        err = 10 * float(abs(v1 - v2)) + noise
        if J <= 2 and N // 4 > 4 * k:
            # low-order fits converge slowly and can agree by accident at two sizes
            g4 = _grid(N // 4, spec.n0, k)
            v4, _, _, _ = _fit(g4, partial_sums(*enc, g4, use_numba=use_numba), N // 4, s, L, J)
            err = max(err, 10 * float(abs(v1 - v4)) / 4 + noise)
        err = max(err, 4 * xprec.EPS * abs(float(v1)))
        tail = TailModel(s, J, L, (int(g1[0]), N), c1, r1)
        cur = SeriesResult(_mpf_to_xreal(v1), err, N, "series", "tail-fit", tail)
        if best is None or cur.error < best.error:
            best = cur
        if err <= target or 2 * N > budget:
            break
        N *= 2
    if best.error > target:
        try:
            v, e = _levin(spec)
        except (ArithmeticError, ValueError, ZeroDivisionError):
            return best
        if e < best.error:
            best = SeriesResult(_mpf_to_xreal(v), max(e, 4 * xprec.EPS), 60, "series", "levin")
    return best


# ---------------------------------------------------------- integral route

def _fact(n: int) -> int:
    return math.factorial(n)


def _ipow(x: XReal, m: int) -> XReal:
    out = None
    for _ in range(m):
        out = x if out is None else out * x
    return out


def _quad(f, tags: str) -> tuple:
    return legendre.integrate(f, tags, with_error=True, complement=True)


def _factor_map(spec: SeriesSpec) -> dict:
    """Factors keyed by ``(kind, offset)``; None when a key repeats."""
    out = {}
    for f in spec.factors:
        key = (f.kind, f.offset)
        if key in out:
            return None
        out[key] = f.comp
    return out


def _all_ones(comp) -> bool:
    return all(k == 1 for k in comp)


def _only(fm: dict, keys) -> bool:
    return fm is not None and set(fm) <= set(keys)


def _default_start(spec: SeriesSpec) -> bool:
    return spec.start is None or spec.start == spec.n0


def _plain(spec: SeriesSpec, p: int, base: str) -> bool:
    return (spec.binom_power == p and spec.denom_base == base and not spec.alternating
            and _default_start(spec))


@dataclass(frozen=True)
class Representation:
    name: str
    formula: str
    match: Callable[[SeriesSpec], dict | None]
    evaluate: Callable[[dict], tuple]


# ------- quadrature families

def _g_sqrt(k: int, x: XReal, c: XReal) -> XReal:
    """``sum_{n>=1} a_n t_n(1_k) x^n`` (times 1, not divided by x)."""
    rs = xprec.sqrt(c)
    if k == 0:
        return (1 - rs) / rs
    lc = xprec.log(c)
    return _ipow(lc, k) / rs * (Fraction((-1) ** k, 2 ** k * _fact(k)))


def _match_log_sqrt(spec):
    fm = _factor_map(spec)
    if not _plain(spec, 1, "n") or not _only(fm, [("t", 0)]):
        return None
    k = fm.get(("t", 0), ())
    if not _all_ones(k):
        return None
    return {"k": len(k), "m": spec.denom_exp - 1}


def _eval_log_sqrt(p):
    k, m = p["k"], p["m"]
    c = Fraction((-1) ** m, _fact(m))

    def f(x, cx):
        v = _g_sqrt(k, x, cx) / x
        return v * _ipow(xprec.log(x), m) if m else v

    v, e = _quad(f, "log-lower,sqrt-upper")
    return v * c, e * abs(float(c))


def _match_mixed_log(spec):
    fm = _factor_map(spec)
    if fm is None:
        return None
    if _plain(spec, 1, "n") and spec.denom_exp == 1 and _only(fm, [("t", 0), ("z*", 0)]):
        k, m = fm.get(("t", 0), ()), fm.get(("z*", 0), ())
        if m and _all_ones(k) and _all_ones(m):
            return {"k": len(k), "m": len(m), "dual": False}
    if _plain(spec, -1, "n") and spec.denom_exp == 2 and _only(fm, [("z", -1), ("t*", 0)]):
        m1, k = fm.get(("z", -1), ()), fm.get(("t*", 0), ())
        if _all_ones(m1) and _all_ones(k):
            return {"k": len(k), "m": len(m1) + 1, "dual": True}
    return None


def _eval_mixed_log(p):
    k, m = p["k"], p["m"]
    if p["dual"]:
        c = Fraction((-1) ** (k + m), _fact(k) * _fact(m) * 2 ** k)

        def f(x, cx):
            return _ipow(xprec.log(cx), m + k) / (x * xprec.sqrt(cx))
    else:
        c = Fraction((-1) ** m, _fact(m))

        def f(x, cx):
            return _g_sqrt(k, x, cx) * _ipow(xprec.log(cx), m) / x
    v, e = _quad(f, "sqrt-upper")
    return v * c, e * abs(float(c))


def _match_k_log(spec):
    if _plain(spec, 2, "2n1") and not spec.factors:
        return {"m": spec.denom_exp - 1}
    return None


def _eval_k_log(p):
    m = p["m"]
    c = XReal.from_fraction(Fraction((-1) ** m, 2 ** m * _fact(m))) / xprec.const_pi()

    def f(x, cx):
        v = legendre.elliptic_K(x, cx) / xprec.sqrt(x)
        return v * _ipow(xprec.log(x), m) if m else v

    v, e = _quad(f, "sqrt-lower,sqrt-upper")
    return v * c, e * abs(float(c))


def _match_k_comp(spec):
    fm = _factor_map(spec)
    if not (_plain(spec, 1, "2n1") and spec.denom_exp == 1 and _only(fm, [("t*", 1)])):
        return None
    m = fm.get(("t*", 1), ())
    return {"m": len(m)} if _all_ones(m) else None


def _eval_k_comp(p):
    m = p["m"]
    c = XReal.from_fraction(Fraction((-1) ** m, 2 ** m * _fact(m))) / xprec.const_pi()

    def f(x, cx):
        v = legendre.elliptic_K(cx, x) / xprec.sqrt(x)
        return v * _ipow(xprec.log(x), m) if m else v

    v, e = _quad(f, "sqrt-lower")
    return v * c, e * abs(float(c))


def _match_k_moment(spec):
    fm = _factor_map(spec)
    if not _plain(spec, 2, "n1") or not _only(fm, [("z*", 1)]):
        return None
    r = fm.get(("z*", 1), ())
    if not r:
        return {"j": spec.denom_exp, "r": 0}
    if spec.denom_exp == 1 and _all_ones(r):
        return {"j": 1, "r": len(r)}
    return None


def _eval_k_moment(p):
    j, r = p["j"], p["r"]
    if r:
        c = Fraction(2 * (-1) ** r, _fact(r))
        tags = "sqrt-upper"

        def f(x, cx):
            return legendre.elliptic_K(x, cx) * _ipow(xprec.log(cx), r)
    else:
        c = Fraction(2 * (-1) ** (j - 1), _fact(j - 1))
        tags = "log-lower,sqrt-upper"

        def f(x, cx):
            v = legendre.elliptic_K(x, cx)
            return v * _ipow(xprec.log(x), j - 1) if j > 1 else v
    v, e = _quad(f, tags)
    cc = XReal.from_fraction(c) / xprec.const_pi()
    return v * cc, e * abs(float(cc))


# ------- iterated-integral families

def _ii(word) -> tuple:
    v, e = cmzv.iterint_with_error(tuple(word))
    return v, e


def _ii_lincomb(lc: dict, letters: dict) -> tuple:
    """``sum c I(0; w; 1)`` for words over symbolic letter names."""
    tot = XComplex(0.0, 0.0)
    err = 0.0
    for w, c in lc.items():
        v, e = _ii([letters[a] for a in w])
        cc = complex(c) if not isinstance(c, (int, Fraction)) else c
        if isinstance(cc, complex):
            tot = tot + v * XComplex(xr(cc.real), xr(cc.imag))
        else:
            tot = tot + v * XReal.from_fraction(Fraction(cc))
        err += e * abs(complex(c))
    return tot, err


def _t2_word(word) -> list:
    """Pull ``I(0; word; 1)`` back through ``x = 1 - t^2``; returns (sign, letters)."""
    m = TABLES["T2"]["map"]
    letters = [dict(m[a]) for a in word]
    letters.reverse()
    return (-1) ** len(word), letters


_F_SQRT = "dt/(t*sqrt(1-t))"


def _li_sqrt_integral(k: tuple, p: int, subtract_one: bool) -> tuple:
    """``I(0; (w_k sh 1^p) . F; 1)`` with ``F = dx/(x sqrt(1-x))`` (minus ``dx/x``)."""
    wk = mpl_word(k, (1,) * len(k))
    wk = tuple("1" if a != "0" else "0" for a in wk)
    lc = shuffle(wk, ("1",) * p) if p else {wk: 1}
    tot = XComplex(0.0, 0.0)
    err = 0.0
    for w, c in lc.items():
        if subtract_one:
            sign, letters = _t2_word(tuple(w) + (_F_SQRT,))
            last = dict(TABLES["T2"]["map"]["0"])
            first = {key: letters[0].get(key, 0) - last.get(key, 0)
                     for key in set(letters[0]) | set(last)}
            letters[0] = {a: b for a, b in first.items() if b}
        else:
            sign, letters = _t2_word(tuple(w) + (_F_SQRT,))
        v, e = _ii(letters)
        tot = tot + v * (sign * c)
        err += e * abs(c)
    return tot, err


def _match_chen(spec):
    fm = _factor_map(spec)
    if not _plain(spec, -1, "n") or not _only(fm, [("t*", 0), ("z", -1)]):
        return None
    pp = fm.get(("t*", 0), ())
    if not _all_ones(pp):
        return None
    k = (spec.denom_exp - 1,) + tuple(fm.get(("z", -1), ()))
    if k[0] < 1:
        return None
    return {"k": k, "p": len(pp)}


def _eval_chen(p):
    v, e = _li_sqrt_integral(p["k"], p["p"], False)
    c = Fraction(1, 2 ** p["p"])
    return v.re * XReal.from_fraction(c), e * float(c)


def _match_xn_li(spec):
    fm = _factor_map(spec)
    if not _plain(spec, 1, "n") or not _only(fm, [("t", 0), ("z*", 0)]):
        return None
    pp = fm.get(("t", 0), ())
    kap = fm.get(("z*", 0), ())
    if not _all_ones(pp) or not kap or kap[-1] != 1:
        return None
    return {"k": (spec.denom_exp,) + tuple(kap[:-1]), "p": len(pp)}


def _sub_series(p: int, zs: tuple | None, m: int) -> tuple:
    fs = [Factor("t", (1,) * p)] if p else []
    if zs:
        fs.append(Factor("z*", zs))
    return eval_series_integral(SeriesSpec(1, "n", m, tuple(fs)), with_error=True)


def _eval_xn_li(par):
    k, p = par["k"], par["p"]
    r = len(k)
    J, err = _li_sqrt_integral(k, p, p == 0)
    J = J.re * XReal.from_fraction(Fraction(1, 2 ** p))
    err = err / 2 ** p
    rest = XReal(0.0)
    for j in range(k[0] - 1):
        z = cmzv.cmzv(parse_composition(",".join(map(str, (k[0] - j,) + k[1:])))).re
        s, e = _sub_series(p, None, j + 1)
        rest = rest + z * s * (-1) ** j
        err += e * abs(float(z))
    for l in range(1, r):
        sgn = (-1) ** (sum(k[:l]) - l)
        for j in range(k[l] - 1):
            z = cmzv.cmzv(parse_composition(",".join(map(str, (k[l] - j,) + k[l + 1:])))).re
            s, e = _sub_series(p, tuple(k[1:l]) + (j + 1,), k[0])
            rest = rest + z * s * (sgn * (-1) ** j)
            err += e * abs(float(z))
    main = (J - rest) * (-1) ** (sum(k) - r)
    return main, err


# letters of the level-4 alphabet used after t -> (1 - t^2)/(1 + t^2)
_L4 = {
    "a": {"0": 1},
    "x0": {"0": -1},
    "y": {"-i": 1, "i": 1, "-1": -1, "1": -1},
    "b": {"-i": 1, "i": -1},
    "c": {"-1": 1, "1": -1},
    "s": {"1": 1, "-1": 1},
    "u": {"0": -1, "i": -1, "-i": -1},
    "ay": {"0": 1, "-1": 1, "1": 1},
}


def _match_arcsin_odd(spec):
    fm = _factor_map(spec)
    if not _plain(spec, 2, "2n1") or not _only(fm, [("t", 0)]):
        return None
    tw = fm.get(("t", 0), ())
    if any(k != 2 for k in tw):
        return None
    return {"p": len(tw) + 1, "m": spec.denom_exp}


def _eval_arcsin_odd(par):
    p, m = par["p"], par["m"]
    w = ("c",) + ("y",) * (m - 1) + ("b",) * (2 * p - 1)
    v, e = _ii_lincomb({w: 1}, _L4)
    # (2 i (-1)^{p+m} / pi) * I
    c = 2 * (-1) ** (p + m)
    val = -v.im * c / xprec.const_pi()
    return val, e * abs(c) / math.pi


def _match_arcsin_even(spec):
    fm = _factor_map(spec)
    if not _plain(spec, -2, "n") or spec.denom_exp < 3:
        return None
    if not _only(fm, [("z", -1), ("t*", 0), ("t", 0)]):
        return None
    if ("t", 0) in fm and ("t*", 0) in fm:
        return None
    zw = fm.get(("z", -1), ())
    if any(k != 2 for k in zw):
        return None
    kk = fm.get(("t*", 0), fm.get(("t", 0), ()))
    if not _all_ones(kk) or (("t", 0) in fm and len(kk) > 1):
        return None
    return {"p": len(zw) + 1, "k": len(kk), "m": spec.denom_exp - 2}


def _eval_arcsin_even(par):
    p, k, m = par["p"], par["k"], par["m"]
    lc = shuffle(("y",) * (m - 1) + ("b",) * (2 * p), ("u",) * k)
    lc = {("c",) + tuple(w): c for w, c in lc.items()}
    v, e = _ii_lincomb(lc, _L4)
    c = (-1) ** (p + m + k) * 2 ** (2 * p + m)
    return v.re * c, e * abs(c)


def _t2_value() -> XReal:
    return cmzv.mtv(parse_composition("2")).re


def _first_power_words(spec) -> tuple | None:
    """Explicit level-4 iterated integrals for a few first-power series."""
    fm = _factor_map(spec)
    if fm is None or spec.alternating or not _default_start(spec):
        return None
    m = spec.denom_exp
    if spec.binom_power == 1 and spec.denom_base == "2n1" and set(fm) == {("t", 0)}:
        if fm[("t", 0)] == (1,):
            lc: dict = {}
            lc[("y",) * (m - 1) + ("b", "a")] = 1
            for j in range(1, m):
                w = ("y",) * (m - j) + ("a",) + ("y",) * (j - 1) + ("b",)
                lc[w] = lc.get(w, 0) + 1
            w = ("s",) + ("y",) * (m - 1) + ("b",)
            lc[w] = lc.get(w, 0) - 1
            return "i", (-1) ** m, lc, 0
        if fm[("t", 0)] == (2,) and m in (1, 2):
            s = -1 if m == 1 else 1
            lc = {("y",) * (m - 1) + ("b",): ("t2", s),
                  ("y",) * (m - 1) + ("ay",) + ("y",) * (m - 1) + ("b",): s}
            lc = {("b",) if m == 1 else ("y", "b"): ("t2", s),
                  (("y", "ay", "b") if m == 1 else ("y", "ay", "y", "b")): s}
            return "i", 1, lc, 0
    if spec.binom_power == -1 and spec.denom_base == "n" and m == 2:
        if set(fm) == {("t", 0)} and fm[("t", 0)] == (2,):
            return "1", -4, {("b", "b"): ("t2", 1), ("y", "a", "b", "b"): 1}, 0
        if set(fm) == {("z", -1), ("t", 0)} and fm[("t", 0)] == (2,) and fm[("z", -1)] == (2,):
            return "1", 16, {("b",) * 4: ("t2", 1), ("y", "a") + ("b",) * 4: 1}, 0
    return None


def _match_first_power(spec):
    got = _first_power_words(spec)
    if got is None:
        return None
    unit, scale, lc, _ = got
    return {"unit": unit, "scale": scale, "lc": lc}


def _eval_first_power(par):
    tot = XComplex(0.0, 0.0)
    err = 0.0
    t2 = None
    for w, c in par["lc"].items():
        v, e = _ii([_L4[a] for a in w])
        if isinstance(c, tuple):
            if t2 is None:
                t2 = _t2_value()
            v = v * t2 * c[1]
        else:
            v = v * c
        tot = tot + v
        err += e * 3
    tot = tot * par["scale"]
    val = -tot.im if par["unit"] == "i" else tot.re
    return val, err * abs(par["scale"])


REPRESENTATIONS: list[Representation] = [
    Representation(
        "log-sqrt",
        "sum_{n>=1} a_n t_n(1_k)/n^{m+1} = (-1)^{m+k}/(2^k m! k!) "
        "int_0^1 log^m(x) log^k(1-x) / (x sqrt(1-x)) dx",
        _match_log_sqrt, _eval_log_sqrt),
    Representation(
        "mixed-log",
        "sum a_n t_n(1_k) zeta*_n(1_m)/n = sum (4^n/C(2n,n)) zeta_{n-1}(1_{m-1}) t*_n(1_k)/n^2 "
        "= (-1)^{k+m}/(k! m! 2^k) int_0^1 log^{m+k}(1-x) / (x sqrt(1-x)) dx",
        _match_mixed_log, _eval_mixed_log),
    Representation(
        "K-log",
        "int_0^1 K(x) log^m(x)/sqrt(x) dx = 2^m m! (-1)^m pi sum_{n>=0} a_n^2/(2n+1)^{m+1}",
        _match_k_log, _eval_k_log),
    Representation(
        "K-complement-log",
        "int_0^1 K(1-x) log^m(x)/sqrt(x) dx = (-1)^m m! 2^m pi sum_{n>=0} a_n t*_{n+1}(1_m)/(2n+1)",
        _match_k_comp, _eval_k_comp),
    Representation(
        "K-moment",
        "sum_{n>=0} a_n^2/(n+1)^j = (2/pi) (-1)^{j-1}/(j-1)! int_0^1 K(x) log^{j-1}(x) dx; "
        "sum_{n>=0} a_n^2 zeta*_{n+1}(1_r)/(n+1) = (2/pi) (-1)^r/r! int_0^1 K(x) log^r(1-x) dx",
        _match_k_moment, _eval_k_moment),
    Representation(
        "polylog-sqrt",
        "sum (4^n/C(2n,n)) t*_n(1_p) zeta_{n-1}(k_2..k_r)/n^{k_1+1} = "
        "(-1)^p/(2^p p!) int_0^1 Li_k(x) log^p(1-x) / (x sqrt(1-x)) dx, "
        "pulled back by x = 1 - t^2 to an iterated integral over {0, 1, -1}",
        _match_chen, _eval_chen),
    Representation(
        "moment-polylog",
        "int_0^1 x^{n-1} Li_k(x) dx expanded in zeta*_n sums, summed against "
        "sum a_n t_n(1_p) x^n and pulled back by x = 1 - t^2",
        _match_xn_li, _eval_xn_li),
    Representation(
        "arcsin-odd",
        "sum_{n>=p-1} a_n^2 t_n(2_{p-1})/(2n+1)^m = "
        "(2i(-1)^{p+m}/pi) int_0^1 (x_{-1}-x_1) y^{m-1} (x_{-i}-x_i)^{2p-1}",
        _match_arcsin_odd, _eval_arcsin_odd),
    Representation(
        "arcsin-even",
        "sum_{n>=p} (4^n/C(2n,n))^2 zeta_{n-1}(2_{p-1}) t*_n(1_k)/n^{m+2} = "
        "(-1)^{p+m+k} 2^{2p+m} int_0^1 (x_{-1}-x_1)(y^{m-1}(x_{-i}-x_i)^{2p} sh (x_0-x_i-x_{-i})^k)",
        _match_arcsin_even, _eval_arcsin_even),
    Representation(
        "first-power",
        "first-power series with t_n(1), t_n(2) weights as explicit level-4 iterated integrals "
        "in y = x_{-i}+x_i-x_{-1}-x_1, a = dt/t and x_{-i}-x_i",
        _match_first_power, _eval_first_power),
]


def find_representation(spec) -> tuple[Representation, dict]:
    spec = _as_spec(spec)
    for rep in REPRESENTATIONS:
        got = rep.match(spec)
        if got is not None:
            return rep, got
    raise NoRepresentation(f"no integral representation registered for {spec.text()!r}")


def eval_series_integral(spec, with_error: bool = False, name: str | None = None):
    """Value of a spec from its registered integral representation.

    ``name`` forces a particular representation.
    """
    spec = _as_spec(spec)
    if name is None:
        rep, par = find_representation(spec)
    else:
        reps = [r for r in REPRESENTATIONS if r.name == name]
        if not reps or reps[0].match(spec) is None:
            raise NoRepresentation(f"representation {name!r} does not apply to {spec.text()!r}")
        rep, par = reps[0], reps[0].match(spec)
    v, e = rep.evaluate(par)
    v = xr(v)
    return (v, float(e)) if with_error else v


# ------------------------------------------------------ arcsin and F_{p,m}

def _check_x(x) -> XReal:
    x = xr(x)
    if abs(float(x)) >= 1:
        raise ValueError("series mode needs |x| < 1")
    return x


def _harmonic_power_series(coef: Callable[[int], XReal], x: XReal, start: int,
                           step_pow: int, offset: int, max_terms: int = 200_000) -> XReal:
    """``sum_{n>=start} coef(n) x^{2n+offset}`` until terms drop below 1e-34."""
    x2 = x * x
    p = _ipow(x, offset) if offset else XReal(1.0)
    for _ in range(start):
        p = p * x2
    acc = XReal(0.0)
    small = 0
    for n in range(start, start + max_terms):
        t = coef(n) * p
        acc = acc + t
        if abs(float(t)) <= 1e-34 * max(abs(float(acc)), 1e-300):
            small += 1
            if small >= 3:
                return acc
        else:
            small = 0
        p = p * x2
    raise ArithmeticError("power series did not converge within the term budget")


class _Running:
    """a_n in double-double and nested sums updated as n increases."""

    def __init__(self, kind: str, comp: tuple, offset: int = 0):
        self.f = Factor(kind, comp, offset)
        self.n = -1
        self.a = XReal(1.0)
        self.state = [XReal(0.0)] * len(comp) + [XReal(1.0)]

    def advance(self, n: int):
        while self.n < n:
            self.n += 1
            if self.n > 0:
                self.a = self.a * (2 * self.n - 1) / (2 * self.n)
            i = self.n + self.f.offset
            if i >= 1 and self.f.comp:
                d = (2 * i - 1) if self.f.kind.startswith("t") else i
                st = self.state
                r = len(self.f.comp)
                order = range(r - 1, -1, -1) if self.f.kind.endswith("*") else range(r)
                for j in order:
                    st[j] = st[j] + st[j + 1] / XReal(float(d)) ** self.f.comp[j]

    def value(self) -> XReal:
        return self.state[0]


def arcsin_series(p: int, x) -> XReal:
    """``(arcsin x)^p / p!`` from its central-binomial series, ``|x| < 1``."""
    if p < 1:
        raise ValueError("p must be >= 1")
    x = _check_x(x)
    return f_pm(p, 1, x)


def f_pm(p: int, m: int, x) -> XReal:
    """``F_{p,m}(x) = int_0^x (dt/sqrt(1-t^2))^p (dt/t)^{m-1}`` by its series, ``|x| < 1``."""
    if p < 1 or m < 1:
        raise ValueError("p and m must be >= 1")
    x = _check_x(x)
    if p % 2:
        q = (p + 1) // 2
        run = _Running("t", (2,) * (q - 1))

        def coef(n):
            run.advance(n)
            return run.a * run.value() / XReal(float(2 * n + 1)) ** m

        return _harmonic_power_series(coef, x, q - 1, 2, 1)
    q = p // 2
    run = _Running("z", (2,) * (q - 1), -1)
    scale = XReal.from_fraction(Fraction(1, 4 ** q * 2 ** (m - 1)))

    def coef(n):
        run.advance(n)
        return run.value() / run.a * scale / XReal(float(n)) ** (m + 1)

    return _harmonic_power_series(coef, x, q, 2, 0)


def f_pm_integral(p: int, m: int, x, with_error: bool = False):
    """``F_{p,m}(x)`` from its defining iterated integral, by quadrature.

    ``F_{p,1}(x) = arcsin(x)^p/p!`` and, for m >= 2,
    ``F_{p,m}(x) = 1/(m-2)! int_0^x log^{m-2}(x/t) arcsin(t)^p/(p! t) dt``.
    """
    x = _check_x(x)
    xf = Fraction(float(x.hi)) + Fraction(float(x.lo))

    def asin(t):
        return xprec.atan2(t, xprec.sqrt((1 - t) * (1 + t)))

    if m == 1:
        v = _ipow(asin(x), p) / _fact(p)
        return (v, 4 * xprec.EPS) if with_error else v
    lx = xprec.log(x)

    def f(t):
        v = _ipow(asin(t), p) / (t * _fact(p))
        if m > 2:
            v = v * _ipow(lx - xprec.log(t), m - 2) / _fact(m - 2)
        return v

    v, e = legendre.integrate(f, legendre.make_rule(0, xf, "log", "none"), with_error=True)
    return (v, e) if with_error else v
