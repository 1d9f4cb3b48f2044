"""Acceptance criteria 1-8, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` (or as a script) to see
the summary lines; each criterion is also an ordinary assertion.
"""
import os
import sys
import time

import pytest

from zetalab import suite

WORKERS = max(1, min(8, os.cpu_count() or 1))
EXACT = sorted(i.id for i in suite.REGISTRY.values() if i.kind == "exact-symbolic")

# criterion -> (glob patterns, tolerance override or None, wall-time limit in seconds)
CRITERIA = {
    1: ([i for i in EXACT if i != "stuffle-homomorphism"], None, 10.0),
    2: (["const-zeta2", "const-zeta3", "const-zeta2bar", "const-t2", "const-t2bar", "const-log2",
         "const-split-*"], 1e-24, 30.0),
    3: (["sq-n1-*", "lin-t-*", "lin-t1-*", "lin-t11-*", "prod-inv-*", "prod-lin-*",
         "prod-duality-*", "lin-odd-ts-*", "cor-*", "chen-dual-*"], 1e-8, 600.0),
    # weight-2 and weight-3 cases of the squared odd family only
    4: (["sq-odd-m0*", "sq-odd-m1*", "sq-odd-general-m[01]", "sq-odd-fl-m[01]", "mtv-cmzv-*",
         "ii-*", "li-half-*", "mpl-half-*", "xn-li-*", "mtv-222-*", "mtv-3-*"], 1e-8, None),
    5: (["dec-*"], 1e-6, None),
    6: (["quad-*"], 1e-14, None),
    7: (["pro-mtv-*", "half-lemma-*"], 1e-8, None),
    8: (["stuffle-homomorphism"], None, None),
}

RESULTS: dict = {}


def evaluate(n: int):
    patterns, tol, limit = CRITERIA[n]
    t0 = time.perf_counter()
    records = {}
    for pat in patterns:
        workers = 1 if n in (1, 2) else WORKERS
        for r in suite.run(pat, precision=32, workers=workers, budget=10 ** 6,
                           tolerance=tol).records:
            records[r.id] = r
    elapsed = time.perf_counter() - t0
    bad = sorted(k for k, r in records.items() if r.verdict != "pass")
    ok = bool(records) and not bad and (limit is None or elapsed < limit)
    detail = f"{len(records)} identities, {elapsed:.1f}s"
    if limit is not None:
        detail += f" (limit {limit:.0f}s)"
    if bad:
        detail += "; not passing: " + ", ".join(f"{k}={records[k].verdict}" for k in bad)
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    return ok, line


@pytest.mark.slow
@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    ok, line = evaluate(n)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def main() -> int:
    lines = [evaluate(n) for n in sorted(CRITERIA)]
    for _, line in lines:
        print(line)
    return 0 if all(ok for ok, _ in lines) else 1


if __name__ == "__main__":
    sys.exit(main())
