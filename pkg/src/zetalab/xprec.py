"""Double-double arithmetic (about 106 bits, 31-32 significant digits).

A value is an unevaluated sum ``hi + lo`` of two doubles with
``|lo| <= ulp(hi)/2``.  The primitive functions below take and return plain
``(hi, lo)`` pairs and contain no branches, so they work unchanged on Python
floats, on numpy arrays (elementwise) and inside numba ``@njit`` kernels.

:class:`XReal` wraps a pair (scalar or array) with operator overloading;
:class:`XComplex` is a pair of XReals.

Set ``ZETALAB_NUMBA=0`` to disable numba; kernels then fall back to their
vectorized numpy implementations.
"""
from __future__ import annotations

import math
import os
import threading
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np

__all__ = [
    "USE_NUMBA",
    "jit",
    "two_sum",
    "quick_two_sum",
    "split",
    "two_prod",
    "dd_add",
    "dd_sub",
    "dd_mul",
    "dd_mul_d",
    "dd_div",
    "dd_sqrt",
    "XReal",
    "XComplex",
    "xr",
    "exp",
    "log",
    "sqrt",
    "sin",
    "cos",
    "atan2",
    "log_complex",
    "const_pi",
    "const_log2",
    "const_catalan",
    "DIGITS",
    "EPS",
]

DIGITS = 32
EPS = 2.0 ** -104


def _env_flag(name: str, default: bool) -> bool:
    v = os.environ.get(name)
    if v is None:
        return default
    return v.strip().lower() not in ("0", "false", "no", "off", "")


try:  # pragma: no cover - depends on environment
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    _HAVE_NUMBA = False

USE_NUMBA = _HAVE_NUMBA and _env_flag("ZETALAB_NUMBA", True)


def jit(fn=None, *, cache=True):
    """``numba.njit`` when numba is enabled, otherwise the identity decorator."""
    if fn is None:
        return lambda f: jit(f, cache=cache)
    if USE_NUMBA:
        return numba.njit(cache=cache)(fn)
    return fn


# ----------------------------------------------------------- primitives

_SPLITTER = 134217729.0  # 2^27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a, b):
    s = a + b
    err = b - (s - a)
    return s, err


def split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    lo = a - hi
    return hi, lo


def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


def dd_sub(ah, al, bh, bl):
    return dd_add(ah, al, -bh, -bl)


def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return quick_two_sum(p, e)


def dd_mul_d(ah, al, b):
    p, e = two_prod(ah, b)
    e = e + al * b
    return quick_two_sum(p, e)


def dd_div(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = dd_mul_d(bh, bl, q1)
    rh, rl = dd_sub(ah, al, ph, pl)
    q2 = rh / bh
    ph, pl = dd_mul_d(bh, bl, q2)
    rh, rl = dd_sub(rh, rl, ph, pl)
    q3 = rh / bh
    q1, q2 = quick_two_sum(q1, q2)
    return dd_add(q1, q2, q3, 0.0 * q3)


def dd_sqrt(ah, al):
    """Square root for ``a > 0`` (one Newton step from the double root)."""
    x = 1.0 / np.sqrt(ah)
    ax = ah * x
    sh, sl = two_prod(ax, ax)
    dh, dl = dd_sub(ah, al, sh, sl)
    return two_sum(ax, dh * (x * 0.5))


class _Ops:
    """Namespace of primitives; jitted copies when numba is active."""

    def __init__(self, ns: dict):
        self.__dict__.update(ns)


def _jit_family(funcs, extra: dict) -> _Ops:
    import types

    ns = dict(extra)
    for f in funcs:
        g = types.FunctionType(f.__code__, ns, f.__name__, f.__defaults__)
        ns[f.__name__] = numba.njit(g) if USE_NUMBA else g
    return _Ops({f.__name__: ns[f.__name__] for f in funcs})


_PRIMS = (two_sum, quick_two_sum, split, two_prod, dd_add, dd_sub, dd_mul, dd_mul_d, dd_div)
#: primitives usable from inside ``@jit`` kernels (plain functions without numba)
kops = _jit_family(_PRIMS, {"np": np, "_SPLITTER": _SPLITTER})


# ------------------------------------------------------------- wrappers


def _pair(x):
    """Coerce numbers, Fractions, strings and XReal to a (hi, lo) pair."""
    if isinstance(x, XReal):
        return x.hi, x.lo
    if isinstance(x, (int, Fraction)):
        f = Fraction(x)
        hi = float(f)
        lo = float(f - Fraction(hi)) if math.isfinite(hi) else 0.0
        return hi, lo
    if isinstance(x, float):
        return x, 0.0
    if isinstance(x, Decimal):
        return _pair(Fraction(x))
    if isinstance(x, str):
        return _pair(Fraction(Decimal(x.strip())))
    if isinstance(x, np.ndarray):
        return x.astype(np.float64), np.zeros_like(x, dtype=np.float64)
    if isinstance(x, np.floating):
        return float(x), 0.0
    raise TypeError(f"cannot convert {type(x).__name__} to XReal")


class XReal:
    """Double-double real; ``hi``/``lo`` may be floats or equal-shape arrays."""

    __slots__ = ("hi", "lo")
    __array_priority__ = 1000

    def __init__(self, hi=0.0, lo=None):
        if lo is None:
            hi, lo = _pair(hi)
        self.hi = hi
        self.lo = lo

    # construction -------------------------------------------------------
    @classmethod
    def from_fraction(cls, q) -> "XReal":
        return cls(*_pair(Fraction(q)))

    @classmethod
    def from_pair(cls, hi, lo) -> "XReal":
        return cls(hi, lo)

    @classmethod
    def array(cls, values) -> "XReal":
        """Vector of XReals from a sequence of numbers / Fractions / XReals."""
        pairs = [_pair(v) for v in values]
        return cls(np.array([p[0] for p in pairs], dtype=np.float64),
                   np.array([p[1] for p in pairs], dtype=np.float64))

    # structure ----------------------------------------------------------
    @property
    def is_array(self) -> bool:
        return isinstance(self.hi, np.ndarray)

    def __len__(self):
        return len(self.hi)

    def __getitem__(self, i):
        h, l = self.hi[i], self.lo[i]
        if np.ndim(h) == 0:
            return XReal(float(h), float(l))
        return XReal(h, l)

    def sum(self) -> "XReal":
        """Compensated sum of an array XReal."""
        h, l = np.asarray(self.hi, dtype=np.float64), np.asarray(self.lo, dtype=np.float64)
        while h.size > 1:
            if h.size % 2:
                h = np.append(h, 0.0)
                l = np.append(l, 0.0)
            h, l = dd_add(h[0::2], l[0::2], h[1::2], l[1::2])
        if h.size == 0:
            return XReal(0.0, 0.0)
        return XReal(float(h[0]), float(l[0]))

    def to_fraction(self) -> Fraction:
        if self.is_array:
            raise TypeError("to_fraction needs a scalar XReal")
        return Fraction(float(self.hi)) + Fraction(float(self.lo))

    def __float__(self):
        return float(self.hi) + float(self.lo)

    def to_decimal_string(self, digits: int = 30) -> str:
        if not math.isfinite(float(self.hi)):
            return str(float(self.hi))
        q = self.to_fraction()
        if q == 0:
            return "0." + "0" * max(digits - 1, 0) + "e+0"
        with localcontext() as ctx:
            ctx.prec = digits + 5
            d = Decimal(q.numerator) / Decimal(q.denominator)
            return format(d, f".{max(digits - 1, 0)}e")

    def __repr__(self):
        if self.is_array:
            return f"XReal(array, shape={np.shape(self.hi)})"
        return f"XReal('{self.to_decimal_string(32)}')"

    def __str__(self):
        if self.is_array:
            return repr(self)
        return self.to_decimal_string(30)

    # arithmetic ---------------------------------------------------------
    def __neg__(self):
        return XReal(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __abs__(self):
        if self.is_array:
            s = np.where(self.hi < 0, -1.0, 1.0)
            return XReal(self.hi * s, self.lo * s)
        return -self if self.hi < 0 else self

    def __add__(self, o):
        if isinstance(o, XComplex):
            return XComplex(self) + o
        oh, ol = _pair(o)
        return XReal(*dd_add(self.hi, self.lo, oh, ol))

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, XComplex):
            return XComplex(self) - o
        oh, ol = _pair(o)
        return XReal(*dd_sub(self.hi, self.lo, oh, ol))

    def __rsub__(self, o):
        return XReal(o) - self

    def __mul__(self, o):
        if isinstance(o, XComplex):
            return XComplex(self) * o
        oh, ol = _pair(o)
        return XReal(*dd_mul(self.hi, self.lo, oh, ol))

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, XComplex):
            return XComplex(self) / o
        oh, ol = _pair(o)
        if not isinstance(oh, np.ndarray) and oh == 0.0:
            raise ZeroDivisionError("XReal division by zero")
        return XReal(*dd_div(self.hi, self.lo, oh, ol))

    def __rtruediv__(self, o):
        return XReal(o) / self

    def __pow__(self, e):
        if not isinstance(e, int):
            raise TypeError("XReal ** supports integer exponents only; use exp/log")
        if e < 0:
            return XReal(1.0, 0.0 * self.lo) / (self ** (-e))
        out = XReal(1.0 + 0.0 * self.hi, 0.0 * self.lo)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def ldexp(self, k):
        return XReal(np.ldexp(self.hi, k), np.ldexp(self.lo, k))

    # comparisons (scalar) -----------------------------------------------
    def _cmp(self, o):
        d = self - o
        return (d.hi > 0) - (d.hi < 0)

    def __eq__(self, o):
        try:
            return self._cmp(o) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, o):
        return self._cmp(o) < 0

    def __le__(self, o):
        return self._cmp(o) <= 0

    def __gt__(self, o):
        return self._cmp(o) > 0

    def __ge__(self, o):
        return self._cmp(o) >= 0

    __hash__ = None


def xr(x) -> XReal:
    return x if isinstance(x, XReal) else XReal(x)


class XComplex:
    __slots__ = ("re", "im")

    def __init__(self, re=0.0, im=0.0):
        if isinstance(re, XComplex):
            re, im = re.re, re.im + xr(im)
        elif isinstance(re, complex):
            re, im = re.real, re.imag
        self.re = xr(re)
        self.im = xr(im)

    @classmethod
    def from_gauss(cls, g) -> "XComplex":
        return cls(XReal.from_fraction(g.re), XReal.from_fraction(g.im))

    def _c(self, o):
        if isinstance(o, XComplex):
            return o
        if hasattr(o, "re") and hasattr(o, "im") and not isinstance(o, XReal):
            return XComplex.from_gauss(o)
        return XComplex(o)

    def __add__(self, o):
        o = self._c(o)
        return XComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._c(o)
        return XComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return self._c(o) - self

    def __neg__(self):
        return XComplex(-self.re, -self.im)

    def __mul__(self, o):
        o = self._c(o)
        return XComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._c(o)
        d = o.re * o.re + o.im * o.im
        n = self * o.conjugate()
        return XComplex(n.re / d, n.im / d)

    def __rtruediv__(self, o):
        return self._c(o) / self

    def __pow__(self, e: int):
        if e < 0:
            return XComplex(1) / (self ** (-e))
        out, base = XComplex(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conjugate(self):
        return XComplex(self.re, -self.im)

    def __abs__(self):
        return sqrt(self.re * self.re + self.im * self.im)

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"XComplex({self.re!s}, {self.im!s})"


# -------------------------------------------------- elementary functions

_lock = threading.RLock()


def _exp_core(h, l, ln2h, ln2l):
    h = np.asarray(h, dtype=np.float64)
    l = np.asarray(l, dtype=np.float64)
    k = np.round(h / ln2h)
    ph, pl = dd_mul_d(ln2h, ln2l, k)
    rh, rl = dd_sub(h, l, ph, pl)
    rh, rl = np.ldexp(rh, -10), np.ldexp(rl, -10)
    # expm1 on |r| < 3.4e-4 by Horner, then (e^r - 1) doubled 10 times
    sh, sl = rh * 0.0, rl * 0.0
    for j in range(12, 0, -1):
        inv = Fraction(1, j)
        ih, il = _pair(inv)
        sh, sl = dd_add(sh, sl, 1.0 + 0.0 * sh, 0.0 * sl)
        sh, sl = dd_mul(sh, sl, rh, rl)
        sh, sl = dd_mul(sh, sl, ih + 0.0 * sh, il + 0.0 * sl)
    # the loop above computes sum r^j/j! via nested Horner: r(1 + r/2(1 + r/3(...)))
    for _ in range(10):
        th, tl = dd_add(sh, sl, 2.0 + 0.0 * sh, 0.0 * sl)
        sh, sl = dd_mul(sh, sl, th, tl)
    eh, el = dd_add(sh, sl, 1.0 + 0.0 * sh, 0.0 * sl)
    ki = k.astype(np.int64)
    return np.ldexp(eh, ki), np.ldexp(el, ki)


def _unwrap(x: XReal, h, l):
    if x.is_array:
        return XReal(h, l)
    return XReal(float(h), float(l))


def exp(x) -> XReal:
    x = xr(x)
    h, l = _exp_core(x.hi, x.lo, _LN2.hi, _LN2.lo)
    return _unwrap(x, h, l)


def log(x) -> XReal:
    """Natural logarithm, ``x > 0`` (Newton correction of the double log)."""
    x = xr(x)
    if not x.is_array and x.hi <= 0:
        raise ValueError("log of a non-positive number")
    y = np.log(np.asarray(x.hi, dtype=np.float64))
    yl = 0.0 * y
    for _ in range(2):
        eh, el = _exp_core(-y, -yl, _LN2.hi, _LN2.lo)
        th, tl = dd_mul(x.hi, x.lo, eh, el)
        th, tl = dd_sub(th, tl, 1.0 + 0.0 * th, 0.0 * tl)
        y, yl = dd_add(y, yl, th, tl)
    return _unwrap(x, y, yl)


def sqrt(x) -> XReal:
    x = xr(x)
    if not x.is_array:
        if x.hi < 0:
            raise ValueError("sqrt of a negative real; use XComplex")
        if x.hi == 0:
            return XReal(0.0, 0.0)
        return XReal(*map(float, dd_sqrt(x.hi, x.lo)))
    h = np.asarray(x.hi, dtype=np.float64)
    safe = np.where(h > 0, h, 1.0)
    rh, rl = dd_sqrt(safe, np.where(h > 0, x.lo, 0.0))
    return XReal(np.where(h > 0, rh, 0.0), np.where(h > 0, rl, 0.0))


def _sincos_core(h, l):
    """sin and cos of a reduced argument |r| <= pi/4 by Taylor series."""
    r2h, r2l = dd_mul(h, l, h, l)
    # sin: r(1 - r^2/(2*3)(1 - r^2/(4*5)(...)))
    sh, sl = 1.0 + 0.0 * h, 0.0 * l
    for j in range(15, 0, -1):
        ih, il = _pair(Fraction(-1, (2 * j) * (2 * j + 1)))
        th, tl = dd_mul(r2h, r2l, ih + 0.0 * h, il + 0.0 * l)
        th, tl = dd_mul(th, tl, sh, sl)
        sh, sl = dd_add(th, tl, 1.0 + 0.0 * h, 0.0 * l)
    sh, sl = dd_mul(sh, sl, h, l)
    ch, cl = 1.0 + 0.0 * h, 0.0 * l
    for j in range(15, 0, -1):
        ih, il = _pair(Fraction(-1, (2 * j - 1) * (2 * j)))
        th, tl = dd_mul(r2h, r2l, ih + 0.0 * h, il + 0.0 * l)
        th, tl = dd_mul(th, tl, ch, cl)
        ch, cl = dd_add(th, tl, 1.0 + 0.0 * h, 0.0 * l)
    return (sh, sl), (ch, cl)


def _sincos(x: XReal):
    c = _consts()
    hp = c["half_pi"]
    h = np.asarray(x.hi, dtype=np.float64)
    l = np.asarray(x.lo, dtype=np.float64)
    k = np.round(h / hp.hi)
    ph, pl = dd_mul_d(hp.hi, hp.lo, k)
    rh, rl = dd_sub(h, l, ph, pl)
    (sh, sl), (ch, cl) = _sincos_core(rh, rl)
    q = np.mod(k, 4).astype(np.int64)
    sin_h = np.choose(q, [sh, ch, -sh, -ch])
    sin_l = np.choose(q, [sl, cl, -sl, -cl])
    cos_h = np.choose(q, [ch, -sh, -ch, sh])
    cos_l = np.choose(q, [cl, -sl, -cl, sl])
    return _unwrap(x, sin_h, sin_l), _unwrap(x, cos_h, cos_l)


def sin(x) -> XReal:
    return _sincos(xr(x))[0]


def cos(x) -> XReal:
    return _sincos(xr(x))[1]


def atan2(y, x) -> XReal:
    """Angle of (x, y) in (-pi, pi]; Newton refinement of the double angle."""
    y, x = xr(y), xr(x)
    if not (x.is_array or y.is_array) and x.hi == 0 and y.hi == 0:
        raise ValueError("atan2(0, 0) is undefined")
    a = XReal(np.arctan2(np.asarray(y.hi, dtype=np.float64), np.asarray(x.hi, dtype=np.float64)),
              0.0 * np.asarray(y.hi, dtype=np.float64))
    if not a.is_array or np.ndim(a.hi) == 0:
        a = XReal(float(a.hi), 0.0)
    for _ in range(2):
        s, c = _sincos(a)
        num = y * c - x * s
        den = x * c + y * s
        a = a + num / den
    return a


def log_complex(z) -> XComplex:
    """Principal logarithm of a nonzero XComplex."""
    if not isinstance(z, XComplex):
        z = XComplex(z)
    r2 = z.re * z.re + z.im * z.im
    return XComplex(log(r2) * 0.5, atan2(z.im, z.re))


def exp_i(theta) -> XComplex:
    s, c = _sincos(xr(theta))
    return XComplex(c, s)


# ------------------------------------------------------------- constants

def _pi_agm() -> XReal:
    """Gauss-Legendre (Brent-Salamin) iteration; quadratically convergent."""
    a = XReal(1.0)
    b = sqrt(XReal(0.5))
    t = XReal(0.25)
    p = 1
    for _ in range(5):
        an = (a + b) * 0.5
        b = sqrt(a * b)
        d = a - an
        t = t - d * d * p
        a = an
        p *= 2
    s = a + b
    return s * s / (t * 4)


def _log2_series() -> XReal:
    """log 2 = sum_{k>=1} 1/(k 2^k), 115 terms."""
    acc = XReal(0.0)
    for k in range(115, 0, -1):
        acc = acc + XReal.from_fraction(Fraction(1, k)).ldexp(-k)
    return acc


def _catalan_ramanujan(pi: XReal) -> XReal:
    """G = (pi/8) log(2 + sqrt 3) + (3/8) sum_{n>=0} 1/((2n+1)^2 C(2n,n))."""
    acc = Fraction(0)
    for n in range(60):
        acc += Fraction(1, (2 * n + 1) ** 2 * math.comb(2 * n, n))
    return pi * log(sqrt(XReal(3.0)) + 2) * 0.125 + XReal.from_fraction(acc * Fraction(3, 8))


_LN2 = _log2_series()
_CONSTS: dict = {"ln2": _LN2}


def _consts() -> dict:
    if "catalan" in _CONSTS:
        return _CONSTS
    with _lock:
        if "half_pi" not in _CONSTS:
            pi = _pi_agm()
            _CONSTS["pi"] = pi
            _CONSTS["half_pi"] = pi * 0.5
        if "catalan" not in _CONSTS:
            # log needs only ln2, so this cannot recurse into an unfinished table
            _CONSTS["catalan"] = _catalan_ramanujan(_CONSTS["pi"])
    return _CONSTS


def const_pi() -> XReal:
    return _consts()["pi"]


def const_log2() -> XReal:
    return _consts()["ln2"]


def const_catalan() -> XReal:
    return _consts()["catalan"]
