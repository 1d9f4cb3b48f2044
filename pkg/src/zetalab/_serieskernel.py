"""Partial sums of central-binomial series with nested harmonic-sum factors.

A term is ``sign * a_n^p * prod_f S_f(n + off_f) / d(n)^m`` where
``a_n = C(2n, n)/4^n`` and each ``S_f`` is one of zeta_n, zeta*_n, t_n, t*_n.
Factors are encoded as flat integer arrays: ``fkind`` (bit 0 star, bit 1
odd denominators), ``foff``, and compositions ``fparts[fptr[f]:fptr[f+1]]``.
Both kernels return the double-double partial sums ``sum_{n0 <= n <= N}``
at every ``N`` in ``samples`` (sorted, ascending).
"""
from __future__ import annotations

import numpy as np

from . import xprec
from .xprec import jit

_k = xprec.kops
dd_add = _k.dd_add
dd_mul = _k.dd_mul
dd_div = _k.dd_div

__all__ = ["partial_sums"]


@jit
def _inv_pow(d, k):
    ih, il = dd_div(1.0, 0.0, d, 0.0)
    ph, pl = 1.0, 0.0
    for _ in range(k):
        ph, pl = dd_mul(ph, pl, ih, il)
    return ph, pl


@jit
def _step(st, base, lo, hi, fparts, star, odd, i):
    r = hi - lo
    d = float(2 * i - 1) if odd else float(i)
    if star:
        for j in range(r - 1, -1, -1):
            wh, wl = _inv_pow(d, fparts[lo + j])
            th, tl = dd_mul(wh, wl, st[base + j + 1, 0], st[base + j + 1, 1])
            st[base + j, 0], st[base + j, 1] = dd_add(st[base + j, 0], st[base + j, 1], th, tl)
    else:
        for j in range(r):
            wh, wl = _inv_pow(d, fparts[lo + j])
            th, tl = dd_mul(wh, wl, st[base + j + 1, 0], st[base + j + 1, 1])
            st[base + j, 0], st[base + j, 1] = dd_add(st[base + j, 0], st[base + j, 1], th, tl)


@jit
def _partial_sums_nb(p, dbase, m, alt, fkind, foff, fptr, fparts, n0, samples):
    nf = fptr.shape[0] - 1
    st = np.zeros((fparts.shape[0] + nf, 2))
    for f in range(nf):
        st[fptr[f + 1] + f, 0] = 1.0
    out = np.zeros((samples.shape[0], 2))
    nmax = samples[samples.shape[0] - 1]
    ah, al = 1.0, 0.0
    sh, sl = 0.0, 0.0
    si = 0
    for n in range(nmax + 1):
        if n > 0:
            ah, al = dd_mul(ah, al, float(2 * n - 1), 0.0)
            ah, al = dd_div(ah, al, float(2 * n), 0.0)
        for f in range(nf):
            i = n + foff[f]
            if i >= 1:
                _step(st, fptr[f] + f, fptr[f], fptr[f + 1], fparts,
                      (fkind[f] & 1) != 0, (fkind[f] & 2) != 0, i)
        if n >= n0:
            if p == 0:
                th, tl = 1.0, 0.0
            elif p == 1:
                th, tl = ah, al
            elif p == 2:
                th, tl = dd_mul(ah, al, ah, al)
            elif p == -1:
                th, tl = dd_div(1.0, 0.0, ah, al)
            else:
                th, tl = dd_mul(ah, al, ah, al)
                th, tl = dd_div(1.0, 0.0, th, tl)
            for f in range(nf):
                b = fptr[f] + f
                th, tl = dd_mul(th, tl, st[b, 0], st[b, 1])
            if dbase == 0:
                d = float(n)
            elif dbase == 1:
                d = float(n + 1)
            else:
                d = float(2 * n + 1)
            wh, wl = _inv_pow(d, m)
            th, tl = dd_mul(th, tl, wh, wl)
            if alt and n % 2 == 1:
                th, tl = -th, -tl
            sh, sl = dd_add(sh, sl, th, tl)
        while si < samples.shape[0] and samples[si] == n:
            out[si, 0] = sh
            out[si, 1] = sl
            si += 1
    return out


# ------------------------------------------------------------ numpy path

def _scan(h, l, op):
    """Inclusive Hillis-Steele prefix scan of dd arrays under ``op``."""
    h = h.copy()
    l = l.copy()
    d = 1
    while d < h.shape[0]:
        nh, nl = op(h[d:], l[d:], h[:-d], l[:-d])
        h = np.concatenate([h[:d], nh])
        l = np.concatenate([l[:d], nl])
        d *= 2
    return h, l


def _inv_pow_np(d, k):
    ih, il = xprec.dd_div(np.ones_like(d), np.zeros_like(d), d, np.zeros_like(d))
    ph, pl = np.ones_like(d), np.zeros_like(d)
    for _ in range(k):
        ph, pl = xprec.dd_mul(ph, pl, ih, il)
    return ph, pl


def _factor_np(parts, star, odd, imax):
    """Values at bounds ``0..imax``."""
    i = np.arange(1, imax + 1, dtype=np.float64)
    d = 2 * i - 1 if odd else i
    r = len(parts)
    # P_{j+1} at bounds 0..imax
    nh = np.ones(imax + 1)
    nl = np.zeros(imax + 1)
    for j in range(r - 1, -1, -1):
        wh, wl = _inv_pow_np(d, parts[j])
        src = (nh[1:], nl[1:]) if star else (nh[:-1], nl[:-1])
        th, tl = xprec.dd_mul(wh, wl, src[0], src[1])
        sh, sl = _scan(th, tl, xprec.dd_add)
        nh = np.concatenate([[0.0], sh])
        nl = np.concatenate([[0.0], sl])
    return nh, nl


def _partial_sums_np(p, dbase, m, alt, fkind, foff, fptr, fparts, n0, samples):
    nmax = int(samples[-1])
    n = np.arange(nmax + 1, dtype=np.float64)
    # a_n^p as a prefix product of exact small-integer ratios
    num = np.where(n > 0, 2 * n - 1, 1.0)
    den = np.where(n > 0, 2 * n, 1.0)
    if p < 0:
        num, den = den, num
    rh, rl = xprec.dd_div(num, np.zeros_like(num), den, np.zeros_like(den))
    ah, al = _scan(rh, rl, xprec.dd_mul)
    th, tl = np.ones(nmax + 1), np.zeros(nmax + 1)
    for _ in range(abs(p)):
        th, tl = xprec.dd_mul(th, tl, ah, al)
    for f in range(len(fptr) - 1):
        parts = [int(x) for x in fparts[fptr[f]:fptr[f + 1]]]
        off = int(foff[f])
        imax = max(nmax + off, 0)
        vh, vl = _factor_np(parts, bool(fkind[f] & 1), bool(fkind[f] & 2), imax)
        idx = n.astype(np.int64) + off
        ok = idx >= 0
        gh = np.where(ok, vh[np.clip(idx, 0, imax)], 1.0 if not parts else 0.0)
        gl = np.where(ok, vl[np.clip(idx, 0, imax)], 0.0)
        th, tl = xprec.dd_mul(th, tl, gh, gl)
    d = (n, n + 1, 2 * n + 1)[dbase]
    d = np.where(d == 0, 1.0, d)
    wh, wl = _inv_pow_np(d, m)
    th, tl = xprec.dd_mul(th, tl, wh, wl)
    if alt:
        sgn = np.where(np.arange(nmax + 1) % 2 == 1, -1.0, 1.0)
        th, tl = th * sgn, tl * sgn
    keep = n >= n0
    th, tl = np.where(keep, th, 0.0), np.where(keep, tl, 0.0)
    sh, sl = _scan(th, tl, xprec.dd_add)
    idx = np.asarray(samples, dtype=np.int64)
    return np.stack([sh[idx], sl[idx]], axis=1)


def partial_sums(p, dbase, m, alt, fkind, foff, fptr, fparts, n0, samples,
                 use_numba: bool | None = None):
    if use_numba is None:
        use_numba = xprec.USE_NUMBA
    args = (int(p), int(dbase), int(m), bool(alt),
            np.ascontiguousarray(fkind, dtype=np.int64),
            np.ascontiguousarray(foff, dtype=np.int64),
            np.ascontiguousarray(fptr, dtype=np.int64),
            np.ascontiguousarray(fparts, dtype=np.int64),
            int(n0),
            np.ascontiguousarray(samples, dtype=np.int64))
    if use_numba and xprec.USE_NUMBA:
        return _partial_sums_nb(*args)
    return _partial_sums_np(*args)
