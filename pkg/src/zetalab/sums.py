"""Finite multiple harmonic sums and the coefficient sequences built from them.

For a composition ``k = (k_1, ..., k_r)``::

    zeta_n(k)   = sum_{n >= n_1 >  n_2 >  ... >  n_r >= 1} prod n_j^{-k_j}
    zeta*_n(k)  = sum_{n >= n_1 >= n_2 >= ... >= n_r >= 1} prod n_j^{-k_j}
    t_n(k), t*_n(k): same chains with denominators (2 n_j - 1)^{k_j}

Twists multiply the summand by ``sigma_j^{n_j}``.  The empty composition
gives 1 for every n >= 0, and the non-star sums vanish when n < depth.
Everything here is exact (``Fraction``) except :func:`b_sequence` and
:func:`partial_star` with a floating argument.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence

from .compositions import TwistedComposition, _as_twisted
from .words import GaussQ, LinComb
from .xprec import XReal, xr

__all__ = [
    "KINDS",
    "finite_sum",
    "zeta_n",
    "zeta_star_n",
    "t_n",
    "t_star_n",
    "zeta_n_alpha",
    "zeta_star_n_alpha",
    "partial_star",
    "bell_partial",
    "a_coeff",
    "a_coeff_cauchy",
    "a_coeff_recurrence",
    "AB_sequences",
    "b_sequence",
    "central_binomial",
    "beta_half",
    "eval_words",
]

KINDS = ("z", "z*", "t", "t*")
_KIND_ALIASES = {
    "z": "z", "zeta": "z", "ζ": "z",
    "z*": "z*", "zeta*": "z*", "zs": "z*", "ζ*": "z*",
    "t": "t",
    "t*": "t*", "ts": "t*",
}


def _kind(kind: str) -> str:
    try:
        return _KIND_ALIASES[kind]
    except KeyError:
        raise ValueError(f"unknown sum kind {kind!r}; expected one of {KINDS}") from None


def _power(sigma, m: int):
    """sigma**m for a 4th root of unity, as int or GaussQ."""
    if sigma == 1:
        return 1
    if sigma == -1:
        return -1 if m % 2 else 1
    e = m % 4
    z = (1, 1j, -1, -1j)[e] if sigma == 1j else (1, -1j, -1, 1j)[e]
    return z if isinstance(z, int) else GaussQ(0, int(z.imag))


def _table(kind: str, parts: tuple, twists: tuple, n: int, denom) -> list:
    """DP table: ``S[j]`` after processing bound n is the sum over suffix j.."""
    star = kind.endswith("*")
    r = len(parts)
    one = Fraction(1)
    S = [Fraction(0)] * r + [one]
    for m in range(1, n + 1):
        d = denom(m)
        if star:
            for j in range(r - 1, -1, -1):
                S[j] = S[j] + _term(d, parts[j], twists[j], m) * S[j + 1]
        else:
            for j in range(0, r):
                S[j] = S[j] + _term(d, parts[j], twists[j], m) * S[j + 1]
    return S


def _term(d, k: int, sigma, m: int):
    base = Fraction(1) / d ** k
    if sigma == 1:
        return base
    return base * _power(sigma, m)


def finite_sum(kind: str, comp, n: int, offset: int = 0, alpha=None):
    """Exact value of one of the four nested sums at outer bound ``n + offset``.

    ``alpha`` (only for ``z``/``z*``) replaces ``n_j`` by ``n_j + alpha - 1``.
    """
    kind = _kind(kind)
    tc = _as_twisted(comp)
    N = n + offset
    if N < 0:
        raise ValueError("outer bound must be >= 0")
    if alpha is not None:
        if kind not in ("z", "z*"):
            raise ValueError("the alpha-parameter is defined for zeta sums only")
        alpha = Fraction(alpha)
        if alpha <= 0 and alpha.denominator == 1:
            raise ValueError("alpha must not be 0, -1, -2, ...")
        denom = lambda m: m + alpha - 1  # noqa: E731
    elif kind.startswith("t"):
        denom = lambda m: Fraction(2 * m - 1)  # noqa: E731
    else:
        denom = Fraction
    if tc.depth == 0:
        return Fraction(1)
    if not kind.endswith("*") and N < tc.depth:
        return Fraction(0)
    return _cached(kind, tc.parts, tc.twists, N, alpha) if alpha is None else \
        _table(kind, tc.parts, tc.twists, N, denom)[0]


@lru_cache(maxsize=50_000)
def _cached(kind, parts, twists, N, alpha):
    denom = (lambda m: Fraction(2 * m - 1)) if kind.startswith("t") else Fraction
    return _table(kind, parts, twists, N, denom)[0]


def zeta_n(comp, n: int, offset: int = 0):
    return finite_sum("z", comp, n, offset)


def zeta_star_n(comp, n: int, offset: int = 0):
    return finite_sum("z*", comp, n, offset)


def t_n(comp, n: int, offset: int = 0):
    return finite_sum("t", comp, n, offset)


def t_star_n(comp, n: int, offset: int = 0):
    return finite_sum("t*", comp, n, offset)


def zeta_n_alpha(comp, n: int, alpha):
    """``sum_{n >= n_1 > ... > n_r >= 1} prod (n_j + alpha - 1)^{-k_j}``."""
    return finite_sum("z", comp, n, alpha=alpha)


def zeta_star_n_alpha(comp, n: int, alpha):
    return finite_sum("z*", comp, n, alpha=alpha)


def partial_star(kind: str, comp, n: int, x):
    """Star sum with ``x^{n_r}`` (``z*``) or ``x^{2 n_r - 1}`` (``t*``) on the innermost index.

    Exact when ``x`` is rational; otherwise the result is an :class:`XReal`.
    """
    kind = _kind(kind)
    if kind not in ("z*", "t*"):
        raise ValueError("partial_star supports kinds z* and t*")
    tc = _as_twisted(comp)
    if not tc.is_untwisted:
        raise ValueError("partial_star takes an untwisted composition")
    parts = tc.parts
    r = len(parts)
    exact = isinstance(x, (int, Fraction))
    X = Fraction(x) if exact else xr(x)
    if r == 0:
        return Fraction(1) if exact else XReal(1.0)
    odd = kind == "t*"
    zero = Fraction(0) if exact else XReal(0.0)
    S = [zero] * r
    step = X * X if odd else X
    xp = X  # x^{2m-1} (t*) or x^m (z*) at m = 1
    for m in range(1, n + 1):
        d = Fraction(2 * m - 1) if odd else Fraction(m)
        for j in range(r - 1, -1, -1):
            w = Fraction(1) / d ** parts[j]
            src = xp if j == r - 1 else S[j + 1]
            S[j] = S[j] + (src * w if exact else src * XReal.from_fraction(w))
        xp = xp * step
    return S[0]


# ------------------------------------------------------------ Bell etc.

def bell_partial(n: int, k: int, xs: Sequence):
    """Partial Bell polynomial ``B_{n,k}(x_1, ..., x_{n-k+1})`` by its recurrence."""
    if n < 0 or k < 0:
        raise ValueError("need n, k >= 0")
    if k > n:
        return Fraction(0)
    xs = [Fraction(x) if not isinstance(x, (Fraction, GaussQ)) else x for x in xs]

    @lru_cache(maxsize=None)
    def B(nn: int, kk: int):
        if nn == 0 and kk == 0:
            return Fraction(1)
        if kk == 0 or nn == 0:
            return Fraction(0)
        acc = Fraction(0)
        for i in range(1, nn - kk + 2):
            acc = acc + math.comb(nn - 1, i - 1) * xs[i - 1] * B(nn - i, kk - 1)
        return acc

    return B(n, k)


def central_binomial(n: int) -> Fraction:
    """``a_n = C(2n, n) / 4^n``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return Fraction(math.comb(2 * n, n), 4 ** n)


def beta_half(n: int) -> Fraction:
    """``B(1/2, n+1) = 2 * 4^n / ((2n+1) C(2n, n))``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return Fraction(2 * 4 ** n, (2 * n + 1) * math.comb(2 * n, n))


def a_coeff(n: int, k: int) -> Fraction:
    """``a_n(k) = 2^k C(2n,n)/4^n t_n(1_k)``."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    return 2 ** k * central_binomial(n) * t_n((1,) * k, n)


def a_coeff_cauchy(n: int, k: int) -> Fraction:
    """Cauchy-product form: coefficient of x^n in ``(-1)^k/k! log^k(1-x)/sqrt(1-x)``."""
    ones = (1,) * (k - 1)
    acc = zeta_n(ones, n - 1) / n
    for i in range(1, n):
        acc += zeta_n(ones, i - 1) / i * central_binomial(n - i)
    return acc


def a_coeff_recurrence(n: int, k: int) -> Fraction:
    """``a_n(k) = (-1)^{k-1}/k sum_{i<k} (-1)^i 2^{k-i} a_n(i) t_n(k-i)``, from a_n(0)."""
    vals = [central_binomial(n)]
    for kk in range(1, k + 1):
        acc = Fraction(0)
        for i in range(kk):
            acc += (-1) ** i * 2 ** (kk - i) * vals[i] * t_n((kk - i,), n)
        vals.append(Fraction((-1) ** (kk - 1), kk) * acc)
    return vals[k]


def AB_sequences(xs: Sequence, m: int, n: int, barred: bool = False):
    """``(A_m(n), B_m(n))`` from their defining recurrences.

    Unbarred: ``B_m`` nests with ``k_{j+1} <= k_j``; barred: strict ``<``.
    ``xs[k-1]`` is ``x_k``.
    """
    x = list(xs[:n])
    if len(x) < n:
        raise ValueError("need at least n values")
    power_sums = [None] + [sum((xk ** p for xk in x), Fraction(0)) for p in range(1, m + 1)]
    A = [Fraction(1)]
    for mm in range(1, m + 1):
        acc = Fraction(0)
        for i in range(mm):
            term = A[i] / math.factorial(i) * power_sums[mm - i]
            acc += (-1) ** i * term if barred else term
        A.append(math.factorial(mm - 1) * ((-1) ** (mm - 1) if barred else 1) * acc)
    # B by DP over the nested sums
    S = [Fraction(0)] * m + [Fraction(1)]
    for k in range(1, n + 1):
        xk = x[k - 1]
        if barred:
            for j in range(m):
                S[j] = S[j] + xk * S[j + 1]
        else:
            for j in range(m - 1, -1, -1):
                S[j] = S[j] + xk * S[j + 1]
    return A[m], S[0]


def b_sequence(jmax: int) -> list:
    """``b_0 = 1``, ``b_j = -(1/j) sum_{l=1}^j 2^l b_{j-l} zeta(l-bar)`` in double-double.

    ``zeta(1-bar) = -log 2`` and ``zeta(l-bar) = (2^{1-l} - 1) zeta(l)``.
    """
    from .cmzv import zeta_alt_depth1

    zbar = [None] + [zeta_alt_depth1(l) for l in range(1, jmax + 1)]
    b = [XReal(1.0)]
    for j in range(1, jmax + 1):
        acc = XReal(0.0)
        for l in range(1, j + 1):
            acc = acc + b[j - l] * zbar[l] * (2 ** l)
        b.append(-acc / j)
    return b


# ------------------------------------------------------ word evaluation

def eval_words(lc: LinComb, n: int, kind: str = "z", offset: int = 0):
    """Evaluate a LinComb of stuffle words ``((k, sigma), ...)`` as nested sums."""
    total = Fraction(0)
    for word, c in lc.items():
        parts = tuple(k for k, _ in word)
        twists = tuple(s for _, s in word)
        total = total + c * finite_sum(kind, TwistedComposition(parts, twists), n, offset)
    return total


def doubled_parity_sum(comp, n: int):
    """``2^{|s|-r} sum_sigma zeta_{2n}(s; sigma)``; equals ``zeta_n(s)``."""
    tc = _as_twisted(comp)
    r = tc.depth
    acc = Fraction(0)
    for sig in product((1, -1), repeat=r):
        acc += finite_sum("z", TwistedComposition(tc.parts, sig), 2 * n)
    return Fraction(2) ** (tc.weight - r) * acc
