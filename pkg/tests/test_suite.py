import json
from pathlib import Path

import pytest

from zetalab import suite
from zetalab.suite import Identity, RegistryError, Side

PAPER = (Path(__file__).resolve().parents[1] / "paper.md").read_text(encoding="utf-8")
FIELDS = ["id", "paper_ref", "lhs_value", "rhs_value", "abs_err", "rel_err", "tolerance",
          "verdict", "seconds"]


def _side():
    return Side("1", "constant", lambda ctx: (1, 0.0))


def test_lint_requires_anchor():
    with pytest.raises(RegistryError):
        Identity("x", "", _side(), _side(), 1e-10)
    with pytest.raises(RegistryError):
        Identity("x", "   ", _side(), _side(), 1e-10)
    with pytest.raises(RegistryError):
        Identity("x", "anchor", _side(), Side("1", "none"), 1e-10)
    with pytest.raises(RegistryError):
        Identity("x", "anchor", _side(), _side(), 1e-10, kind="exact-symbolic")


def test_duplicate_registration_rejected():
    first = next(iter(suite.REGISTRY.values()))
    with pytest.raises(RegistryError):
        suite.register(first)


def test_every_anchor_is_quoted_verbatim():
    missing = [i.id for i in suite.REGISTRY.values() if i.paper_ref not in PAPER]
    assert missing == []


def test_registry_covers_families():
    for pattern in ("sq-n1-*", "sq-odd-*", "lin-t-*", "pro-mtv-*", "dec-*", "const-*", "quad-*",
                    "half-lemma-*", "mtv-*", "li-half-*", "ii-*"):
        assert suite.identities(pattern), pattern


def test_explain():
    text = suite.explain("words-lemma")
    assert "Hoffman's $\\Q$-algebra of words" in text
    text = suite.explain("sq-n1-m1")
    assert "\\frac4{\\pi}" in text
    with pytest.raises(RegistryError):
        suite.explain("bogus")


def test_four_over_pi_passes():
    rep = suite.run("sq-n1-m1")
    (rec,) = rep.records
    assert rec.verdict == "pass" and rec.abs_err < 1e-10


EXACT = sorted(i.id for i in suite.REGISTRY.values() if i.kind == "exact-symbolic")


@pytest.mark.parametrize("ident", EXACT)
def test_exact_checks_pass(ident):
    (rec,) = suite.run(ident).records
    assert rec.verdict == "pass", rec.detail


def test_json_schema():
    rep = suite.run("sq-n1-m[12]")
    data = json.loads(rep.to_json())
    assert [list(d) for d in data] == [FIELDS] * len(data)
    assert {d["verdict"] for d in data} <= {"pass", "fail", "inconclusive"}


def test_deterministic():
    a = json.loads(suite.run("lin-t-*", workers=1).to_json())
    b = json.loads(suite.run("lin-t-*", workers=2).to_json())
    for d in a + b:
        d.pop("seconds")
    assert a == b


def test_failures_are_recorded_not_raised():
    def boom(ctx):
        raise ArithmeticError("no")
    ident = Identity("tmp-boom", "anchor", Side("x", "raise", boom), _side(), 1e-10)
    rec = suite._evaluate(ident, suite.Context())
    assert rec.verdict == "fail" and "ArithmeticError" in rec.detail


def test_inconclusive_verdict():
    ident = Identity("tmp-loose", "anchor", Side("x", "noisy", lambda ctx: (1, 1e-3)), _side(), 1e-10)
    assert suite._evaluate(ident, suite.Context()).verdict == "inconclusive"


def test_precision_floor():
    with pytest.raises(ValueError):
        suite.run("sq-n1-m1", precision=8)
