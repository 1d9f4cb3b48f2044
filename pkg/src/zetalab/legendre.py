"""Legendre polynomials, Fourier-Legendre coefficients of log-type functions,
the complete elliptic integral K, and a double-double quadrature engine.

``K(x)`` uses the parameter convention ``K(x) = (pi/2) sum a_n^2 x^n`` with
``a_n = C(2n, n)/4^n``, i.e. ``x`` is the parameter ``m = k^2``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable

import numpy as np

from . import xprec
from .compositions import Composition
from .sums import central_binomial, t_n, t_star_n, zeta_n, zeta_n_alpha, zeta_star_n
from .xprec import XReal, xr

__all__ = [
    "legendre_P",
    "fl_coeff_logm",
    "fl_coeff_logm_sqrt",
    "deriv_logm",
    "deriv_logm_sqrt",
    "deriv_logm_alpha",
    "elliptic_K",
    "elliptic_K_series",
    "elliptic_K_fl",
    "QuadratureRule",
    "make_rule",
    "integrate",
    "fl_reconstruct_logm",
    "fl_reconstruct_logm_sqrt",
]


def _ones(k: int) -> Composition:
    return Composition((1,) * k)


# ------------------------------------------------------------ polynomials

def legendre_P(n: int, x):
    """``P_n(x)`` by the three-term recurrence.

    Exact for int/Fraction ``x``; otherwise an :class:`XReal` (scalar or array).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    exact = isinstance(x, (int, Fraction))
    if exact:
        x = Fraction(x)
        p0, p1 = Fraction(1), x
    else:
        x = xr(x)
        p0, p1 = x * 0 + 1, x
    if n == 0:
        return p0
    for k in range(1, n):
        p0, p1 = p1, (p1 * x * (2 * k + 1) - p0 * k) / (k + 1)
    return p1


# ------------------------------------------------------- FL coefficients

def fl_coeff_logm(n: int, m: int, exact: bool = False):
    """``int_0^1 P_n(2x-1) log^m(x) dx``."""
    if n < 0 or m < 0:
        raise ValueError("n, m must be >= 0")
    if n == 0:
        val = Fraction((-1) ** m * factorial(m))
    elif m == 0:
        val = Fraction(0)
    else:
        s = sum(zeta_n(_ones(k - 1), n - 1) * zeta_star_n(_ones(m - k), n + 1) for k in range(1, m + 1))
        val = Fraction((-1) ** (m + n) * factorial(m), n * (n + 1)) * s
    return val if exact else XReal.from_fraction(val)


def fl_coeff_logm_sqrt(n: int, m: int, exact: bool = False):
    """``int_0^1 P_n(2x-1) log^m(x) / sqrt(x) dx``."""
    if n < 0 or m < 0:
        raise ValueError("n, m must be >= 0")
    s = sum(t_n(_ones(k), n) * t_star_n(_ones(m - k), n + 1) for k in range(m + 1))
    val = Fraction((-1) ** (n + m) * factorial(m) * 2 ** (m + 1), 2 * n + 1) * s
    return val if exact else XReal.from_fraction(val)


# ------------------------------------------------------------ derivatives

def _logpowers(x: XReal, m: int) -> list:
    lg = xprec.log(x)
    out = [x * 0 + 1]
    for _ in range(m):
        out.append(out[-1] * lg)
    return out


def _check_x(x) -> XReal:
    x = xr(x)
    if np.any(np.asarray(x.hi) <= 0):
        raise ValueError("x must be positive")
    return x


def deriv_logm(n: int, m: int, x) -> XReal:
    """``d^n/dx^n log^m(x)``."""
    x = _check_x(x)
    lp = _logpowers(x, m)
    if n == 0:
        return lp[m]
    acc = x * 0
    for k in range(1, m + 1):
        c = (-1) ** k * factorial(k) * comb(m, k) * zeta_n(_ones(k - 1), n - 1)
        acc = acc + lp[m - k] * XReal.from_fraction(c)
    return acc * ((-1) ** n * factorial(n - 1)) / x ** n


def deriv_logm_sqrt(n: int, m: int, x) -> XReal:
    """``d^n/dx^n (log^m(x) / sqrt(x))``."""
    x = _check_x(x)
    lp = _logpowers(x, m)
    acc = x * 0
    for k in range(m + 1):
        c = (-1) ** k * factorial(k) * comb(m, k) * 2 ** k * t_n(_ones(k), n)
        acc = acc + lp[m - k] * XReal.from_fraction(c)
    pref = XReal.from_fraction((-1) ** n * factorial(n) * central_binomial(n))
    return acc * pref / (x ** n * xprec.sqrt(x))


def _rising(a: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for j in range(n):
        out *= a + j
    return out


def deriv_logm_alpha(n: int, m: int, alpha, x) -> XReal:
    """``d^n/dx^n (log^m(x) / x^alpha)`` for rational ``alpha`` not in {0, -1, -2, ...}."""
    alpha = Fraction(alpha)
    if alpha <= 0 and alpha.denominator == 1:
        raise ValueError("alpha must not be a non-positive integer")
    x = _check_x(x)
    lp = _logpowers(x, m)
    acc = x * 0
    for k in range(m + 1):
        c = (-1) ** k * factorial(k) * comb(m, k) * zeta_n_alpha(_ones(k), n, alpha)
        acc = acc + lp[m - k] * XReal.from_fraction(c)
    xa = xprec.exp(xprec.log(x) * XReal.from_fraction(alpha))
    return acc * XReal.from_fraction((-1) ** n * _rising(alpha, n)) / (x ** n * xa)


def fl_reconstruct_logm(m: int, x, terms: int) -> XReal:
    """Partial sum of the FL expansion of ``log^m(x)`` with ``terms`` terms."""
    y = xr(x) * 2 - 1
    acc = XReal(0.0)
    for n in range(terms):
        acc = acc + fl_coeff_logm(n, m) * (2 * n + 1) * legendre_P(n, y)
    return acc


def fl_reconstruct_logm_sqrt(m: int, x, terms: int) -> XReal:
    y = xr(x) * 2 - 1
    acc = XReal(0.0)
    for n in range(terms):
        acc = acc + fl_coeff_logm_sqrt(n, m) * (2 * n + 1) * legendre_P(n, y)
    return acc


# ----------------------------------------------------------- elliptic K

def elliptic_K(x, complement=None) -> XReal:
    """``K(x) = pi / (2 AGM(1, sqrt(1 - x)))`` for ``0 <= x < 1``.

    Works elementwise on arrays; ``complement`` may supply ``1 - x`` exactly.
    """
    x = xr(x)
    c = xr(complement) if complement is not None else 1 - x
    hx = np.asarray(x.hi)
    if np.any(hx < 0) or np.any(np.asarray(c.hi) <= 0):
        raise ValueError("K(x) needs 0 <= x < 1")
    a, b = XReal(1.0 + 0.0 * hx, 0.0 * hx), xprec.sqrt(c)
    if not x.is_array:
        a = XReal(1.0)
    for _ in range(64):
        if np.all(np.abs(np.asarray((a - b).hi)) <= 1e-33 * np.asarray(a.hi)):
            break
        a, b = (a + b) / 2, xprec.sqrt(a * b)
    return xprec.const_pi() / (a + b)


def elliptic_K_series(x, terms: int) -> XReal:
    """``(pi/2) sum_{n<terms} a_n^2 x^n``."""
    x = xr(x)
    acc, p = XReal(0.0), XReal(1.0)
    for n in range(terms):
        acc = acc + XReal.from_fraction(central_binomial(n) ** 2) * p
        p = p * x
    return acc * xprec.const_pi() / 2


def elliptic_K_fl(x, terms: int) -> XReal:
    """``2 sum_{n<terms} P_n(2x-1)/(2n+1)``."""
    y = xr(x) * 2 - 1
    acc = XReal(0.0)
    for n in range(terms):
        acc = acc + legendre_P(n, y) / (2 * n + 1)
    return acc * 2


# -------------------------------------------------------------- quadrature

_node_lock = threading.Lock()


@lru_cache(maxsize=None)
def _gl_nodes_cached(order: int):
    import mpmath

    with mpmath.workdps(45):
        xs, ws = mpmath.mp.gauss_quadrature(order, "legendre")
        # map [-1, 1] -> [0, 1]
        xs = [(x + 1) / 2 for x in xs]
        ws = [w / 2 for w in ws]
        xq = [Fraction(mpmath.nstr(x, 42)) for x in xs]
        wq = [Fraction(mpmath.nstr(w, 42)) for w in ws]
    return XReal.array(xq), XReal.array(wq)


def _gl_nodes(order: int):
    with _node_lock:
        return _gl_nodes_cached(order)


def _graded_panels(levels: int) -> list:
    """Panels of [0, 1] refined geometrically towards 0."""
    pts = [Fraction(0)] + [Fraction(1, 2 ** j) for j in range(levels, -1, -1)]
    return list(zip(pts, pts[1:]))


@dataclass
class QuadratureRule:
    """Composite Gauss-Legendre nodes/weights on ``[a, b]``.

    ``lower`` is one of ``none``, ``sqrt`` or ``log`` and ``upper`` one of
    ``none`` or ``sqrt``; these select the substitutions ``x = a + u^2``,
    ``x = a + h e^{-v}`` and ``x = b - u^2`` on the respective halves.
    """

    a: Fraction
    b: Fraction
    lower: str
    upper: str
    order: int
    levels: int
    nodes: XReal
    weights: XReal
    # b - x, exact even where x rounds to b
    complement: XReal | None = None

    def halved(self) -> "QuadratureRule":
        return make_rule(self.a, self.b, self.lower, self.upper, self.order, self.levels, refine=2)


def _panel_nodes(panels, order: int, refine: int):
    xi, wi = _gl_nodes(order)
    xs, ws = [], []
    for lo, hi in panels:
        step = (hi - lo) / refine
        for r in range(refine):
            l0 = lo + step * r
            L = XReal.from_fraction(l0)
            H = XReal.from_fraction(step)
            xs.append(L + H * xi)
            ws.append(H * wi)
    return (XReal(np.concatenate([x.hi for x in xs]), np.concatenate([x.lo for x in xs])),
            XReal(np.concatenate([w.hi for w in ws]), np.concatenate([w.lo for w in ws])))


def _half(h: Fraction, kind: str, order: int, levels: int, refine: int):
    """Offsets ``d`` in ``(0, h)`` from the singular end, with weights."""
    if kind == "none":
        s, w = _panel_nodes(_graded_panels(levels), order, refine)
        return s * XReal.from_fraction(h), w * XReal.from_fraction(h)
    if kind == "sqrt":
        # d = u^2 with u in (0, sqrt h); grading in u keeps log factors accurate
        rh = xprec.sqrt(XReal.from_fraction(h))
        s, w = _panel_nodes(_graded_panels(levels), order, refine)
        u = s * rh
        return u * u, w * rh * u * 2
    if kind == "log":
        # d = h e^{-v}, v in (0, 128)
        pts = [Fraction(0)] + [Fraction(2 ** j) for j in range(8)]
        v, w = _panel_nodes(list(zip(pts, pts[1:])), order, refine)
        d = xprec.exp(-v) * XReal.from_fraction(h)
        return d, w * d
    raise ValueError(f"unknown substitution {kind!r}")


def make_rule(a=0, b=1, lower: str = "none", upper: str = "none", order: int = 24,
              levels: int = 110, refine: int = 1) -> QuadratureRule:
    """Build a composite rule; accepts tags like ``sqrt-lower``/``log-lower``/``sqrt-upper``."""
    a, b = Fraction(a), Fraction(b)
    for tag in (lower, upper):
        if tag not in ("none", "sqrt", "log"):
            raise ValueError(f"unknown substitution {tag!r}")
    if upper == "log":
        raise ValueError("log substitution is only available at the lower end")
    h = (b - a) / 2
    dl, wl = _half(h, lower, order, levels, refine)
    du, wu = _half(h, upper, order, levels, refine)
    A, B = XReal.from_fraction(a), XReal.from_fraction(b)
    xl = A + dl
    xu = B - du
    nodes = XReal(np.concatenate([xl.hi, xu.hi]), np.concatenate([xl.lo, xu.lo]))
    weights = XReal(np.concatenate([wl.hi, wu.hi]), np.concatenate([wl.lo, wu.lo]))
    cl = (B - A) - dl
    comp = XReal(np.concatenate([cl.hi, du.hi]), np.concatenate([cl.lo, du.lo]))
    return QuadratureRule(a, b, lower, upper, order, levels, nodes, weights, comp)


def rule_from_tags(tags: str = "none", a=0, b=1, **kw) -> QuadratureRule:
    """``"sqrt-lower,sqrt-upper"`` style tags to a rule."""
    lower = upper = "none"
    for t in (x.strip() for x in tags.split(",") if x.strip()):
        if t == "none":
            continue
        kind, _, end = t.partition("-")
        if end == "lower":
            lower = kind
        elif end == "upper":
            upper = kind
        else:
            raise ValueError(f"bad substitution tag {t!r}")
    return make_rule(a, b, lower, upper, **kw)


def integrate(f: Callable[..., XReal], rule: QuadratureRule | str | None = None,
              tol: float | None = None, with_error: bool = False,
              complement: bool = False):
    """``sum w_i f(x_i)`` on the rule and on the rule with halved panels.

    Returns the halved-panel value (and the difference as error estimate).
    With ``complement=True`` the integrand is called as ``f(x, b - x)``,
    which keeps factors like ``log(1 - x)`` accurate next to ``b``.
    """
    if rule is None:
        rule = make_rule()
    elif isinstance(rule, str):
        rule = rule_from_tags(rule)

    def call(r):
        return xr(f(r.nodes, r.complement) if complement else f(r.nodes))

    coarse = (rule.weights * call(rule)).sum()
    fine_rule = rule.halved()
    terms = fine_rule.weights * call(fine_rule)
    fine = terms.sum()
    # rounding floor: a few ulps of the absolute mass
    floor = 16 * xprec.EPS * float(np.sum(np.abs(terms.hi)))
    err = max(abs(float(fine - coarse)), floor)
    if tol is not None and err > tol:
        raise ArithmeticError(f"quadrature error estimate {err:.2e} exceeds tolerance {tol:.2e}")
    return (fine, err) if with_error else fine


def beta_deriv_b_closed(n: int, k: int) -> XReal:
    """``(-1)^k k! pi a_n sum_j b_j zeta*_n(1_{k-j})``: the k-th b-derivative of B(n+1/2, b) at b=1/2."""
    from .sums import b_sequence

    bs = b_sequence(k)
    acc = XReal(0.0)
    for j in range(k + 1):
        acc = acc + bs[j] * XReal.from_fraction(zeta_star_n(_ones(k - j), n))
    return acc * XReal.from_fraction((-1) ** k * factorial(k) * central_binomial(n)) * xprec.const_pi()

