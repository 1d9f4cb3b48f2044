"""Power-series kernels for iterated integrals over a single segment.

A pass integrates the letters of a word one after another, starting from the
constant series ``1``.  After rescaling, the segment is ``s in [0, 1]``.  A
letter is a sum of terms ``kappa ds/(b - s)`` with ``|b| > 1``, plus an
optional singular term ``kappa ds/(0 - s)``.  Complex double-double numbers
are stored as rows ``(re_hi, re_lo, im_hi, im_lo)``.

Both kernels return the values of every prefix of the word at ``s = 1``.
"""
from __future__ import annotations

import numpy as np

from . import xprec
from .xprec import jit

dd_add = xprec.kops.dd_add
dd_sub = xprec.kops.dd_sub
dd_mul = xprec.kops.dd_mul
dd_div = xprec.kops.dd_div

__all__ = ["prefix_values"]


@jit
def _cmul(a0, a1, a2, a3, b0, b1, b2, b3):
    p0, p1 = dd_mul(a0, a1, b0, b1)
    q0, q1 = dd_mul(a2, a3, b2, b3)
    r0, r1 = dd_mul(a0, a1, b2, b3)
    s0, s1 = dd_mul(a2, a3, b0, b1)
    x0, x1 = dd_sub(p0, p1, q0, q1)
    y0, y1 = dd_add(r0, r1, s0, s1)
    return x0, x1, y0, y1


@jit
def _prefix_kernel_nb(ptr, inv_b, kappa, sing, m):
    nl = ptr.shape[0] - 1
    g = np.zeros((m + 1, 4))
    f = np.zeros((m + 1, 4))
    g[0, 0] = 1.0
    out = np.zeros((nl, 4))
    for l in range(nl):
        f[:, :] = 0.0
        for p in range(ptr[l], ptr[l + 1]):
            b0, b1, b2, b3 = inv_b[p, 0], inv_b[p, 1], inv_b[p, 2], inv_b[p, 3]
            k0, k1, k2, k3 = kappa[p, 0], kappa[p, 1], kappa[p, 2], kappa[p, 3]
            h0 = 0.0
            h1 = 0.0
            h2 = 0.0
            h3 = 0.0
            for n in range(m):
                s0, s1 = dd_add(g[n, 0], g[n, 1], h0, h1)
                s2, s3 = dd_add(g[n, 2], g[n, 3], h2, h3)
                h0, h1, h2, h3 = _cmul(s0, s1, s2, s3, b0, b1, b2, b3)
                t0, t1, t2, t3 = _cmul(k0, k1, k2, k3, h0, h1, h2, h3)
                d = float(n + 1)
                t0, t1 = dd_div(t0, t1, d, 0.0)
                t2, t3 = dd_div(t2, t3, d, 0.0)
                f[n + 1, 0], f[n + 1, 1] = dd_add(f[n + 1, 0], f[n + 1, 1], t0, t1)
                f[n + 1, 2], f[n + 1, 3] = dd_add(f[n + 1, 2], f[n + 1, 3], t2, t3)
        if sing[l, 0] != 0.0 or sing[l, 2] != 0.0:
            c0, c1, c2, c3 = -sing[l, 0], -sing[l, 1], -sing[l, 2], -sing[l, 3]
            for n in range(1, m + 1):
                t0, t1, t2, t3 = _cmul(c0, c1, c2, c3, g[n, 0], g[n, 1], g[n, 2], g[n, 3])
                d = float(n)
                t0, t1 = dd_div(t0, t1, d, 0.0)
                t2, t3 = dd_div(t2, t3, d, 0.0)
                f[n, 0], f[n, 1] = dd_add(f[n, 0], f[n, 1], t0, t1)
                f[n, 2], f[n, 3] = dd_add(f[n, 2], f[n, 3], t2, t3)
        g, f = f, g
        a0 = 0.0
        a1 = 0.0
        a2 = 0.0
        a3 = 0.0
        for n in range(1, m + 1):
            a0, a1 = dd_add(a0, a1, g[n, 0], g[n, 1])
            a2, a3 = dd_add(a2, a3, g[n, 2], g[n, 3])
        out[l, 0] = a0
        out[l, 1] = a1
        out[l, 2] = a2
        out[l, 3] = a3
    return out


# ------------------------------------------------------------ numpy path

def _cmul_np(a, b):
    """Complex dd product of stacked arrays with last axis of length 4."""
    p = xprec.dd_mul(a[..., 0], a[..., 1], b[..., 0], b[..., 1])
    q = xprec.dd_mul(a[..., 2], a[..., 3], b[..., 2], b[..., 3])
    r = xprec.dd_mul(a[..., 0], a[..., 1], b[..., 2], b[..., 3])
    s = xprec.dd_mul(a[..., 2], a[..., 3], b[..., 0], b[..., 1])
    x = xprec.dd_sub(p[0], p[1], q[0], q[1])
    y = xprec.dd_add(r[0], r[1], s[0], s[1])
    return np.stack([x[0], x[1], y[0], y[1]], axis=-1)


def _cadd_np(a, b):
    x = xprec.dd_add(a[..., 0], a[..., 1], b[..., 0], b[..., 1])
    y = xprec.dd_add(a[..., 2], a[..., 3], b[..., 2], b[..., 3])
    return np.stack([x[0], x[1], y[0], y[1]], axis=-1)


def _cdiv_real_np(a, d):
    x = xprec.dd_div(a[..., 0], a[..., 1], d, 0.0)
    y = xprec.dd_div(a[..., 2], a[..., 3], d, 0.0)
    return np.stack([x[0], x[1], y[0], y[1]], axis=-1)


def affine_scan(c, a):
    """``h_n = a h_{n-1} + c_n`` with ``h_{-1} = 0``, by log-depth doubling."""
    x = c.copy()
    pw = np.asarray(a, dtype=np.float64)
    d = 1
    n = x.shape[0]
    while d < n:
        x[d:] = _cadd_np(x[d:], _cmul_np(np.broadcast_to(pw, x[:-d].shape), x[:-d]))
        pw = _cmul_np(pw, pw)
        d *= 2
    return x


def csum_np(x):
    """Pairwise dd sum of the rows of an ``(n, 4)`` array."""
    x = np.asarray(x, dtype=np.float64)
    while x.shape[0] > 1:
        if x.shape[0] % 2:
            x = np.vstack([x, np.zeros((1, 4))])
        x = _cadd_np(x[0::2], x[1::2])
    if x.shape[0] == 0:
        return np.zeros(4)
    return x[0]


def _prefix_kernel_np(ptr, inv_b, kappa, sing, m):
    nl = ptr.shape[0] - 1
    g = np.zeros((m + 1, 4))
    g[0, 0] = 1.0
    n_idx = np.arange(1, m + 1, dtype=np.float64)
    out = np.zeros((nl, 4))
    for l in range(nl):
        f = np.zeros((m + 1, 4))
        for p in range(ptr[l], ptr[l + 1]):
            ib = inv_b[p]
            h = affine_scan(_cmul_np(np.broadcast_to(ib, g[:m].shape), g[:m]), ib)
            t = _cmul_np(np.broadcast_to(kappa[p], h.shape), h)
            f[1:] = _cadd_np(f[1:], _cdiv_real_np(t, n_idx))
        if sing[l, 0] != 0.0 or sing[l, 2] != 0.0:
            t = _cmul_np(np.broadcast_to(-sing[l], g[1:].shape), g[1:])
            f[1:] = _cadd_np(f[1:], _cdiv_real_np(t, n_idx))
        g = f
        out[l] = csum_np(g[1:])
    return out


def prefix_values(ptr, inv_b, kappa, sing, m: int, use_numba: bool | None = None):
    """Prefix values ``(L, 4)`` of a pass truncated at degree ``m``."""
    if use_numba is None:
        use_numba = xprec.USE_NUMBA
    args = (np.ascontiguousarray(ptr, dtype=np.int64),
            np.ascontiguousarray(inv_b, dtype=np.float64).reshape(-1, 4),
            np.ascontiguousarray(kappa, dtype=np.float64).reshape(-1, 4),
            np.ascontiguousarray(sing, dtype=np.float64).reshape(-1, 4),
            int(m))
    if use_numba and xprec.USE_NUMBA:
        return _prefix_kernel_nb(*args)
    return _prefix_kernel_np(*args)
