import io
import json
import subprocess
import sys

import mpmath
import pytest

from zetalab import cli


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_dual():
    assert run("dual", "1,1,2,1") == (0, "3,2\n")


def test_constant_t2():
    code, text = run("constant", "--expr", "t(2)")
    assert code == 0
    value = text.splitlines()[0]
    assert len(value.replace("-", "").split("e")[0].replace(".", "")) == 30
    assert abs(mpmath.mpf(value) - mpmath.pi ** 2 / 8) < 1e-28


def test_prec_controls_digits():
    _, text = run("--prec", "20", "constant", "--expr", "z(2)")
    assert len(text.splitlines()[0].split("e")[0].replace(".", "")) == 18


def test_verify_empty_filter_exits_zero():
    code, text = run("verify", "--filter", "no-such-family-*")
    assert code == 0 and "0 identities" in text


def test_verify_json(tmp_path):
    path = tmp_path / "r.json"
    code, text = run("verify", "--filter", "sq-n1-m1", "--json", str(path))
    assert code == 0 and "pass" in text
    data = json.loads(path.read_text())
    assert data[0]["id"] == "sq-n1-m1" and data[0]["verdict"] == "pass"


def test_verify_failure_exit_one():
    code, text = run("verify", "--filter", "sq-n1-zs1")
    assert code == 1 and "fail" in text


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["dual", "1,,2"],
    ["--prec", "8", "dual", "2"],
    ["eval-series", "--spec", "binom:9 denom:n^2"],
    ["explain", "bogus"],
    ["eval-series", "--spec", "binom:-1 denom:n^4 f:z*(3)", "--route", "integral"],
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_evaluation_failure_exit_one():
    code, _ = run("constant", "--expr", "Li(2;3)")
    assert code == 1


def test_eval_series_output():
    code, text = run("eval-series", "--spec", "binom:2 denom:n1^1", "--route", "both")
    assert code == 0
    lines = dict(line.split(None, 1) for line in text.splitlines())
    assert "integral" in text and lines["terms"]
    assert abs(mpmath.mpf(text.split()[1]) - 4 / mpmath.pi) < 1e-20


def test_finsum():
    assert run("finsum", "--kind", "z", "--comp", "1", "--n", "3")[1].startswith("11/6")
    code, text = run("finsum", "--kind", "t*", "--comp", "1,1", "--n", "2", "--x", "1/2")
    assert code == 0
    assert run("finsum", "--kind", "q", "--comp", "1", "--n", "3")[0] == 2


def test_stuffle_and_shuffle():
    code, text = run("stuffle", "1", "1")
    assert code == 0 and "2*(1,1)" in text and "(2)" in text
    code, text = run("shuffle", "0", "1")
    assert code == 0 and "0 1" in text and "1 0" in text


def test_fl():
    code, text = run("fl", "--fn", "logm", "--m", "1", "--n", "1")
    assert code == 0 and "1/2" in text


def test_env_override(monkeypatch):
    monkeypatch.setenv("ZETALAB_PREC", "20")
    _, text = run("constant", "--expr", "z(2)")
    assert len(text.splitlines()[0].split("e")[0].replace(".", "")) == 18
    # an explicit flag wins over the environment
    _, text = run("--prec", "24", "constant", "--expr", "z(2)")
    assert len(text.splitlines()[0].split("e")[0].replace(".", "")) == 22
    monkeypatch.setenv("ZETALAB_PREC", "many")
    assert run("dual", "2")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zetalab", "dual", "3,2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "1,1,2,1"
