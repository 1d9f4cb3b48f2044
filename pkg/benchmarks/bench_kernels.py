"""Compare the numba kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat R]

Both paths are selected per call (``use_numba=``), so one process suffices.
The first numba call includes compilation and is reported separately.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from zetalab import apery, cmzv, xprec
from zetalab._serieskernel import partial_sums

SERIES = [
    "binom:2 denom:n1^1",
    "binom:1 denom:n^2 f:t(1,1)",
    "binom:1 denom:n^1 f:t(1,1,1) f:z*(1,1,1)",
]
WORDS = [
    ("1", "0", "0"),
    ("i", "0", {"1": 1, "-1": 1}, "0"),
    ("-1", "1", "0", "i", "0", "0"),
]


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_series(repeat: int, nmax: int):
    samples = np.unique(np.geomspace(16, nmax, 40).astype(np.int64))
    rows = []
    for text in SERIES:
        enc = apery._encode(apery.parse_series_spec(text))
        t0 = time.perf_counter()
        a = partial_sums(*enc, samples, use_numba=True)
        first = time.perf_counter() - t0
        nb = _best(lambda: partial_sums(*enc, samples, use_numba=True), repeat)
        npy = _best(lambda: partial_sums(*enc, samples, use_numba=False), repeat)
        b = partial_sums(*enc, samples, use_numba=False)
        diff = float(np.max(np.abs((a[:, 0] - b[:, 0]) + (a[:, 1] - b[:, 1]))))
        rows.append((f"partial sums to {nmax}: {text}", first, nb, npy, diff))
    return rows


def bench_iterint(repeat: int):
    rows = []
    for w in WORDS:
        t0 = time.perf_counter()
        a = cmzv.iterint(w, use_numba=True)
        first = time.perf_counter() - t0
        nb = _best(lambda: cmzv.iterint(w, use_numba=True), repeat)
        npy = _best(lambda: cmzv.iterint(w, use_numba=False), repeat)
        b = cmzv.iterint(w, use_numba=False)
        rows.append((f"iterint {len(w)} letters", first, nb, npy, abs(complex(a - b))))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--nmax", type=int, default=2 ** 18)
    args = ap.parse_args()
    if not xprec.USE_NUMBA:
        print("numba disabled (ZETALAB_NUMBA=0 or not installed); only the numpy path runs")
    print(f"{"case":70s} {'first':>8s} {'numba':>9s} {'numpy':>9s} {'speedup':>8s} {'|diff|':>9s}")
    for name, first, nb, npy, diff in bench_series(args.repeat, args.nmax) + bench_iterint(args.repeat):
        print(f"{name:70s} {first:8.3f} {nb:9.4f} {npy:9.4f} {npy / nb:8.1f} {diff:9.1e}")


if __name__ == "__main__":
    main()
