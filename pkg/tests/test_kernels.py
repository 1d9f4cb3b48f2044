import os
import subprocess
import sys

import numpy as np
import pytest

from zetalab import apery, cmzv, xprec
from zetalab._serieskernel import partial_sums

SPECS = ["binom:2 denom:n1^1", "binom:1 denom:n^2 f:t(1,1)", "binom:-1 denom:2n1^3 f:z*(1)@1",
         "binom:0 denom:n^2 sign:alt f:z(2)@-1"]


@pytest.mark.parametrize("text", SPECS)
def test_series_kernels_agree(text):
    enc = apery._encode(apery.parse_series_spec(text))
    samples = np.array([17, 100, 1000, 5000], dtype=np.int64)
    a = partial_sums(*enc, samples, use_numba=True)
    b = partial_sums(*enc, samples, use_numba=False)
    assert np.max(np.abs((a[:, 0] - b[:, 0]) + (a[:, 1] - b[:, 1]))) < 1e-26


@pytest.mark.parametrize("w", [("1", "0", "0"), ("i", "0", "-1"), ("-1", "1", "0", "i")])
def test_iterint_kernels_agree(w):
    a = cmzv.iterint(w, use_numba=True)
    b = cmzv.iterint(w, use_numba=False)
    assert abs(complex((a - b).re.hi, (a - b).im.hi)) < 1e-28


def test_partial_sums_exact_small():
    spec = apery.parse_series_spec("binom:1 denom:n^2 f:t(1)")
    enc = apery._encode(spec)
    got = partial_sums(*enc, np.array([12]), use_numba=False)[0]
    exact = sum(spec.term(n) for n in range(13))
    assert abs(float(xprec.XReal(got[0], got[1]) - xprec.XReal.from_fraction(exact))) < 1e-30


def test_env_switch_disables_numba():
    env = dict(os.environ, ZETALAB_NUMBA="0")
    code = "from zetalab import xprec; print(xprec.USE_NUMBA)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "False"
