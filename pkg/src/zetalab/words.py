"""Exact word algebras: stuffle, shuffle, star/non-star conversion,
shuffle regularization and the change-of-variable tables.

Stuffle words are tuples of letters ``(k, sigma)``; sigma is a root of unity
(normally +-1).  Under ``z_{(k1,s1)}...z_{(kr,sr)} -> zeta_n(k; s)`` the
quasi-shuffle with ``(k,s) . (l,t) = (k+l, s*t)`` is multiplicative.

Form words are tuples of letter strings.  ``"0"`` is ``dt/t``; any other
letter names a pole ``a`` and stands for ``dt/(a - t)``.  The first letter
of a word sits at the lower endpoint::

    I(a; f_1 ... f_p; b) = int_{a < t_1 < ... < t_p < b} f_1(t_1) ... f_p(t_p)

so ``("1", "0")`` is ``Li_2(1)`` on ``[0, 1]``.  A word is admissible on
``[0, 1]`` when its first letter is not ``"0"`` and its last letter is not
``"1"``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Callable, Iterable, Mapping

from .compositions import Composition, TwistedComposition, _as_twisted, compositions_of

__all__ = [
    "GaussQ",
    "LinComb",
    "stuffle",
    "shuffle",
    "star_expand",
    "shuffle_regularize",
    "substitute",
    "expand_letters",
    "reverse_word",
    "pole_letter",
    "pole_value",
    "mpl_word",
    "hoffman_word_lemma_sides",
    "TABLES",
    "COMPOSITE",
]


class GaussQ:
    """Exact element of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re_=0, im=0):
        if isinstance(re_, GaussQ):
            re_, im = re_.re, re_.im + Fraction(im)
        elif isinstance(re_, complex):
            re_, im = Fraction(re_.real), Fraction(re_.imag) + Fraction(im)
        self.re = Fraction(re_)
        self.im = Fraction(im)

    @staticmethod
    def coerce(x) -> "GaussQ":
        return x if isinstance(x, GaussQ) else GaussQ(x)

    def __add__(self, o):
        o = GaussQ.coerce(o)
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussQ.coerce(o))

    def __rsub__(self, o):
        return GaussQ.coerce(o) - self

    def __mul__(self, o):
        o = GaussQ.coerce(o)
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussQ(self.re, -self.im)

    def __truediv__(self, o):
        o = GaussQ.coerce(o)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        n = self * o.conjugate()
        return GaussQ(n.re / d, n.im / d)

    def __rtruediv__(self, o):
        return GaussQ.coerce(o) / self

    def __pow__(self, e: int):
        if e < 0:
            return GaussQ(1) / (self ** (-e))
        out, base = GaussQ(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, o):
        try:
            o = GaussQ.coerce(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussQ({self})"

    def __str__(self):
        def q(x):
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

        if self.im == 0:
            return q(self.re)
        if self.im == 1:
            imag = "i"
        elif self.im == -1:
            imag = "-i"
        else:
            imag = q(self.im) + "i"
        if self.re == 0:
            return imag
        return q(self.re) + ("" if imag.startswith("-") else "+") + imag


class LinComb(dict):
    """Finite linear combination ``key -> coefficient`` with exact coefficients.

    Zero coefficients are never stored.
    """

    def __init__(self, data: Mapping | Iterable = ()):
        super().__init__()
        items = data.items() if isinstance(data, Mapping) else data
        for k, c in items:
            self.add_term(k, c)

    @classmethod
    def single(cls, key, coeff=1):
        return cls([(key, coeff)])

    def add_term(self, key, coeff):
        if not coeff:
            return
        new = self.get(key, 0) + coeff
        if new:
            dict.__setitem__(self, key, new)
        else:
            self.pop(key, None)

    def __iadd__(self, other):
        for k, c in other.items():
            self.add_term(k, c)
        return self

    def __add__(self, other):
        out = LinComb(self)
        out += other
        return out

    def __neg__(self):
        return LinComb((k, -c) for k, c in self.items())

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return LinComb((k, c * s) for k, c in self.items())

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    def map_keys(self, fn: Callable) -> "LinComb":
        out = LinComb()
        for k, c in self.items():
            out.add_term(fn(k), c)
        return out

    def bilinear(self, other: "LinComb", op: Callable[[object, object], Mapping]) -> "LinComb":
        out = LinComb()
        for k1, c1 in self.items():
            for k2, c2 in other.items():
                for k, c in op(k1, k2).items():
                    out.add_term(k, c * c1 * c2)
        return out

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return dict(self) == dict(LinComb(other))
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"LinComb({dict.__repr__(self)})"


# ---------------------------------------------------------------- stuffle

def _letter_product(a, b):
    return (a[0] + b[0], _mul_root(a[1], b[1]))


def _mul_root(s, t):
    z = s * t
    if isinstance(z, complex):
        if z.imag == 0:
            return int(z.real)
        if z.real == 0:
            return 1j if z.imag > 0 else -1j
    return z


@lru_cache(maxsize=200_000)
def _stuffle_words(u: tuple, v: tuple) -> tuple:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    a, ur = u[0], u[1:]
    b, vr = v[0], v[1:]
    acc: dict = {}
    for w, c in _stuffle_words(ur, v):
        key = (a,) + w
        acc[key] = acc.get(key, 0) + c
    for w, c in _stuffle_words(u, vr):
        key = (b,) + w
        acc[key] = acc.get(key, 0) + c
    ab = _letter_product(a, b)
    for w, c in _stuffle_words(ur, vr):
        key = (ab,) + w
        acc[key] = acc.get(key, 0) + c
    return tuple(acc.items())


def _as_stuffle_word(w) -> tuple:
    if isinstance(w, (Composition, TwistedComposition, str)):
        tc = _as_twisted(w)
        return tuple(zip(tc.parts, tc.twists))
    w = tuple(w)
    if all(isinstance(x, int) for x in w):
        return tuple((k, 1) for k in w)
    return tuple((int(k), s) for k, s in w)


def stuffle(u, v) -> LinComb:
    """Quasi-shuffle product of two stuffle words.

    Accepts compositions, twisted compositions, grammar strings, tuples of
    ints or tuples of ``(k, sigma)``.  Keys of the result are tuples of
    ``(k, sigma)`` letters.

    >>> dict(stuffle((1,), (1,)))
    {((1, 1), (1, 1)): 2, ((2, 1),): 1}
    """
    return LinComb(_stuffle_words(_as_stuffle_word(u), _as_stuffle_word(v)))


def stuffle_lincomb(a: LinComb, b: LinComb) -> LinComb:
    return a.bilinear(b, lambda x, y: dict(_stuffle_words(x, y)))


def hoffman_word_lemma_sides(m: int) -> tuple[LinComb, LinComb]:
    """Both sides of ``sum_k sum_{|r|=k} z_1^{m-k} * z_r = sum_{|s|=m} 2^dep(s) z_s``."""
    lhs = LinComb()
    for k in range(m + 1):
        ones = ((1, 1),) * (m - k)
        for r in compositions_of(k):
            lhs += stuffle(ones, r)
    rhs = LinComb()
    for s in compositions_of(m):
        rhs.add_term(_as_stuffle_word(s), 2 ** s.depth)
    return lhs, rhs


# ---------------------------------------------------------------- shuffle

@lru_cache(maxsize=200_000)
def _shuffle_words(u: tuple, v: tuple) -> tuple:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    acc: dict = {}
    for w, c in _shuffle_words(u[1:], v):
        key = (u[0],) + w
        acc[key] = acc.get(key, 0) + c
    for w, c in _shuffle_words(u, v[1:]):
        key = (v[0],) + w
        acc[key] = acc.get(key, 0) + c
    return tuple(acc.items())


def _as_form_word(w) -> tuple:
    if isinstance(w, str):
        return tuple(x for x in re.split(r"[\s,]+", w.strip()) if x)
    return tuple(str(x) for x in w)


def shuffle(u, v) -> LinComb:
    """Shuffle product of two form words (or of two LinCombs of form words).

    >>> dict(shuffle(("1",), ("0",)))
    {('1', '0'): 1, ('0', '1'): 1}
    """
    if isinstance(u, LinComb) or isinstance(v, LinComb):
        a = u if isinstance(u, LinComb) else LinComb.single(_as_form_word(u))
        b = v if isinstance(v, LinComb) else LinComb.single(_as_form_word(v))
        return a.bilinear(b, lambda x, y: dict(_shuffle_words(x, y)))
    return LinComb(_shuffle_words(_as_form_word(u), _as_form_word(v)))


def shuffle_power(letter: str, m: int) -> LinComb:
    """``letter`` shuffled with itself m times, equal to ``m! letter^m``."""
    return LinComb.single((letter,) * m, factorial(m))


# ------------------------------------------------------ star <-> non-star

_STAR_DIRECTIONS = {
    # zeta*(k) = sum over merges of zeta(merged): unsigned
    "star_in_nonstar": False,
    "star->nonstar": False,
    # zeta(k) = sum over merges of (-1)^{#pluses} zeta*(merged): signed
    "nonstar_in_star": True,
    "nonstar->star": True,
}


def star_expand(c, direction: str = "star_in_nonstar") -> LinComb:
    """Rewrite a (twisted) composition across the star/non-star divide.

    ``star_in_nonstar`` expresses the star value of ``c`` through non-star
    values (sum over all ways of merging neighbours, coefficients +1);
    ``nonstar_in_star`` goes the other way with sign ``(-1)^{#merges}``.
    Merging adds parts and multiplies twists.  Keys have the input's type.
    """
    if direction not in _STAR_DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    signed = _STAR_DIRECTIONS[direction]
    twisted_input = isinstance(c, (TwistedComposition, str))
    tc = _as_twisted(c)
    if tc.depth == 0:
        raise ValueError("star_expand needs a non-empty composition")
    out = LinComb()
    letters = list(tc)
    for plus in product((False, True), repeat=tc.depth - 1):
        parts = [letters[0]]
        for merge, nxt in zip(plus, letters[1:]):
            if merge:
                k, s = parts[-1]
                parts[-1] = (k + nxt[0], _mul_root(s, nxt[1]))
            else:
                parts.append(nxt)
        key_tc = TwistedComposition(tuple(p[0] for p in parts), tuple(p[1] for p in parts))
        key = key_tc if twisted_input else key_tc.composition
        out.add_term(key, (-1) ** sum(plus) if signed else 1)
    return out


def star_roundtrip(c) -> LinComb:
    """Apply ``nonstar_in_star`` then re-expand every star term; must return ``{c: 1}``."""
    out = LinComb()
    for key, coeff in star_expand(c, "nonstar_in_star").items():
        out += star_expand(key, "star_in_nonstar").scale(coeff)
    return out


# ------------------------------------------------------- form letters

_POLE_RE = re.compile(
    r"^(?P<re>[+-]?\d+(?:/\d+)?)?(?:(?P<isign>[+-])?(?P<im>\d+(?:/\d+)?)?i)?$"
)


def pole_letter(a) -> str:
    """Canonical letter string for the form ``dt/(a - t)``; ``a`` must be nonzero."""
    g = GaussQ.coerce(a if not isinstance(a, str) else pole_value(a))
    if not g:
        raise ValueError("pole 0 is the letter '0' with coefficient -1")
    return str(g)


def pole_value(letter: str) -> GaussQ:
    """Inverse of :func:`pole_letter`."""
    s = letter.strip().replace(" ", "")
    m = _POLE_RE.match(s)
    if not m or not s:
        raise ValueError(f"bad pole letter {letter!r}")
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    if s.endswith("i"):
        mag = Fraction(m.group("im")) if m.group("im") else Fraction(1)
        sign = -1 if m.group("isign") == "-" else 1
        return GaussQ(re_part, sign * mag)
    return GaussQ(re_part)


def _pole_or_zero(a) -> LinComb:
    """LinComb over letters for ``dt/(a - t)``, handling ``a = 0``."""
    g = GaussQ.coerce(a)
    if not g:
        return LinComb.single("0", -1)
    return LinComb.single(str(g), 1)


def expand_letters(letters: Iterable[Mapping]) -> LinComb:
    """Multiply out a word whose letters are linear combinations of basic letters."""
    out = LinComb.single((), 1)
    for lc in letters:
        nxt = LinComb()
        for w, c in out.items():
            for a, d in lc.items():
                nxt.add_term(w + (a,), c * d)
        out = nxt
    return out


def reverse_word(w: tuple) -> LinComb:
    """``I(a; w; b) = (-1)^len I(b; reversed w; a)``: reversal with its sign."""
    return LinComb.single(tuple(reversed(w)), (-1) ** len(w))


def mpl_word(parts: Iterable[int], args: Iterable) -> tuple:
    """Form word for ``Li_k(z_1,...,z_r)`` on ``[0, 1]``.

    ``Li_{k_1..k_r}(z) = int_0^1 w_{b_r} 0^{k_r-1} ... w_{b_1} 0^{k_1-1}`` with
    ``b_j = 1/(z_1...z_j)``.
    """
    parts = tuple(parts)
    args = [GaussQ.coerce(z) for z in args]
    if len(parts) != len(args):
        raise ValueError("parts and arguments must have equal length")
    poles = []
    acc = GaussQ(1)
    for z in args:
        acc = acc * z
        poles.append(GaussQ(1) / acc)
    w: list[str] = []
    for k, b in zip(reversed(parts), reversed(poles)):
        w.append(str(b))
        w.extend(["0"] * (k - 1))
    return tuple(w)


# ---------------------------------------------------- change of variables

_H = Fraction(1, 2)
I_ = GaussQ(0, 1)

# composite 1-forms expanded over the level-4 alphabet (pure identities)
COMPOSITE: dict[str, LinComb] = {
    "tdt/(1-t^2)": LinComb({"1": _H, "-1": _H}),
    "dt/(1-t^2)": LinComb({"1": _H, "-1": -_H}),
    "tdt/(1+t^2)": LinComb({"i": -_H, "-i": -_H}),
    "dt/(1+t^2)": LinComb({"i": GaussQ(0, _H), "-i": GaussQ(0, -_H)}),
    "dt/(t(1-t^2))": LinComb({"0": 1, "1": _H, "-1": _H}),
    "2tdt/(1-t^2)": LinComb({"1": 1, "-1": 1}),
}


def _y():
    return LinComb({"-i": 1, "i": 1, "-1": -1, "1": -1})


def _z():
    return LinComb({"0": -1, "-i": -1, "i": -1})


def _t1_letter(letter: str) -> LinComb:
    if letter == "0":
        return LinComb.single("1", -1)
    return _pole_or_zero(1 - pole_value(letter))


# pullbacks; each entry maps a source letter to a LinComb of target letters
TABLES: dict[str, dict] = {
    # t -> 1 - t, endpoints 0 <-> 1
    "T1": {"map": _t1_letter, "endpoints": {0: 1, 1: 0}},
    # t -> 1 - t^2 (t >= 0), endpoints 0 <-> 1
    "T2": {
        "map": {
            "0": LinComb({"1": -1, "-1": -1}),
            "1": LinComb({"0": -2}),
            "dt/(t*sqrt(1-t))": LinComb({"1": -1, "-1": 1}),
        },
        "endpoints": {0: 1, 1: 0},
    },
    # t -> (1 - t^2)/(1 + t^2), endpoints 0 <-> 1
    "T3": {
        "map": {
            "0": _y(),
            "dt/sqrt(1-t^2)": LinComb({"-i": I_, "i": -I_}),
            "dt/(1-t^2)": LinComb({"0": -1}),
            "tdt/(1-t^2)": _z(),
            "dt/(t(1-t^2))": _y() + _z(),
            "dt/(t*sqrt(1-t^2))": LinComb({"-1": 1, "1": -1}),
        },
        "endpoints": {0: 1, 1: 0},
    },
}


def substitute_letter(letter: str, table: str) -> LinComb:
    try:
        spec = TABLES[table]
    except KeyError:
        raise ValueError(f"unknown table {table!r}") from None
    m = spec["map"]
    if callable(m):
        return m(letter)
    if letter not in m:
        raise ValueError(f"letter {letter!r} is not in the source alphabet of {table}")
    return m[letter]


def substitute(w, table: str, normalize: bool = False) -> LinComb:
    """Pull a form word back letter by letter through a change of variables.

    The result is the word over the new variable with the same letter order;
    the integration endpoints are mapped by ``TABLES[table]["endpoints"]``.
    All three tables swap 0 and 1, so with ``normalize=True`` the words are
    reversed (with sign ``(-1)^len``) to read again from 0 up to 1.
    """
    w = _as_form_word(w) if not isinstance(w, tuple) else w
    out = expand_letters(substitute_letter(a, table) for a in w)
    if normalize:
        flipped = LinComb()
        for word, c in out.items():
            flipped += reverse_word(word).scale(c)
        out = flipped
    return out


# -------------------------------------------------- shuffle regularization

def _admissible01(w: tuple) -> bool:
    return not w or (w[0] != "0" and w[-1] != "1")


def _poly_add(acc: dict, poly: Mapping, scale) -> None:
    for deg, lc in poly.items():
        cur = acc.setdefault(deg, LinComb())
        cur += lc.scale(scale)
        if not cur:
            del acc[deg]


@lru_cache(maxsize=100_000)
def _regularize(w: tuple) -> tuple:
    """Return ``((a, b), LinComb)`` pairs: ``w = sum T0^a T1^b coeff`` under shuffle."""
    if _admissible01(w):
        return (((0, 0), LinComb.single(w)),)
    acc: dict = {}
    if w[-1] == "1":
        m = 0
        while m < len(w) and w[len(w) - 1 - m] == "1":
            m += 1
        v, prev = w[: len(w) - m], w[: len(w) - 1]
        # prev sh "1" = m * w + (words with the extra "1" inserted inside v)
        for (a, b), lc in _regularize(prev):
            _poly_add(acc, {(a, b + 1): lc}, Fraction(1, m))
        for j in range(len(v)):
            other = prev[:j] + ("1",) + prev[j:]
            for key, lc in _regularize(other):
                _poly_add(acc, {key: lc}, Fraction(-1, m))
    else:
        m = 0
        while m < len(w) and w[m] == "0":
            m += 1
        v, prev = w[m:], w[1:]
        for (a, b), lc in _regularize(prev):
            _poly_add(acc, {(a + 1, b): lc}, Fraction(1, m))
        for j in range(1, len(v) + 1):
            other = prev[: m - 1 + j] + ("0",) + prev[m - 1 + j :]
            for key, lc in _regularize(other):
                _poly_add(acc, {key: lc}, Fraction(-1, m))
    return tuple(sorted(acc.items()))


def shuffle_regularize(w, split: bool = False) -> dict:
    """Shuffle-regularize a form word on ``[0, 1]``.

    Returns ``{power: LinComb}`` whose coefficient words are all admissible.
    With ``split=True`` the keys are pairs ``(a, b)``, the exponents of T0
    (standing for the bare letter ``"0"``) and T1 (the bare letter ``"1"``);
    ``w`` equals ``sum coeff sh T0^a sh T1^b`` exactly, where ``T0^a`` is the
    a-fold shuffle power of ``"0"``.  By default
    both are identified with a single T, which is what a symmetric cut-off
    ``[eps, 1 - eps]`` produces, and the constant term is the regularized value.
    """
    w = _as_form_word(w) if not isinstance(w, tuple) else w
    pairs = dict(_regularize(w))
    if split:
        return pairs
    out: dict = {}
    for (a, b), lc in pairs.items():
        _poly_add(out, {a + b: lc}, 1)
    return out


def unregularize(poly: Mapping) -> LinComb:
    """Shuffle a split regularization back into a single LinComb of words."""
    out = LinComb()
    for (a, b), lc in poly.items():
        div = shuffle(shuffle_power("0", a), shuffle_power("1", b))
        out += shuffle(lc, div)
    return out
