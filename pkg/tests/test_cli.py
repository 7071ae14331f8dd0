import io
import json
import subprocess
import sys

import pytest

from ewlquat.cli import dispatch
from ewlquat.game import Game
from ewlquat.strategy import MixedStrategy

PD = {"payoffs": {"CC": [3, 3], "DD": [1, 1], "CD": [0, 5], "DC": [5, 0]}}
ZERO_SUM = {"payoffs": {"CC": [4, -4], "DD": [1, -1], "CD": [2, -2], "DC": [-3, 3]}}
UNIFORM = {"atoms": [{"q": q, "w": 0.25} for q in ([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1])]}
ONE = {"atoms": [{"q": [1, 0, 0, 0], "w": 1.0}]}


@pytest.fixture
def files(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)
    return write


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_verify(files):
    code, out, _ = run(["verify", "--game", files("pd.json", PD), "--p1", files("nu.json", ONE), "--p2", files("mu.json", ONE)])
    assert code == 0
    rep = json.loads(out)
    assert rep["schema_version"] == "1"
    assert rep["is_equilibrium"] is False
    assert rep["slack"] == [2.0, 2.0]


def test_payoff_and_zero_sum_check(files):
    g = files("zs.json", ZERO_SUM)
    u = files("u.json", UNIFORM)
    code, out, _ = run(["payoff", "--game", g, "--p1", u, "--p2", u])
    assert json.loads(out)["payoffs"] == [1.0, -1.0]
    code, out, _ = run(["zero-sum-check", "--game", g, "--p1", u, "--p2", u])
    rep = json.loads(out)
    assert rep["applicable"] and rep["confirmed"]


def test_find_zero_sum(files):
    code, out, _ = run(["find", "--game", files("zs.json", ZERO_SUM), "--seed", "7"])
    rep = json.loads(out)
    assert code == 0 and rep["count"] > 0
    for item in rep["equilibria"]:
        assert item["classification"]["report"]["payoffs"] == pytest.approx([1.0, -1.0], abs=1e-8)
        assert item["classification"]["type"] in ("a", "b", "e")
        # emitted strategies re-parse
        MixedStrategy.from_dict(item["p1"])
        MixedStrategy.from_dict(item["p2"])


def test_find_deterministic(files):
    g = files("pd.json", PD)
    assert run(["find", "--game", g, "--seed", "7"])[1] == run(["find", "--game", g, "--seed", "7"])[1]


def test_reduce_and_equivalent(files):
    s = files("s.json", {"atoms": [{"q": [1, 0, 0, 0], "w": 0.5}, {"q": [0.6, 0.8, 0, 0], "w": 0.5}]})
    code, out, _ = run(["reduce", "--p1", s])
    rep = json.loads(out)
    assert len(rep["strategy"]["atoms"]) == 2
    r = files("r.json", rep["strategy"])
    code, out, _ = run(["equivalent", "--p1", s, "--p2", r])
    assert json.loads(out)["equivalent"] is True
    code, out, _ = run(["equivalent", "--p1", s, "--p2", files("one.json", ONE)])
    assert json.loads(out)["equivalent"] is False


def test_best_response(files):
    code, out, _ = run(["best-response", "--game", files("pd.json", PD), "--player", "one", "--p2", files("one.json", ONE)])
    rep = json.loads(out)
    assert rep["value"] == 5 and rep["basis"] == [[0.0, 0.0, 0.0, 1.0]]


def test_classify_and_genericity(files):
    g = files("pd.json", PD)
    u = files("u.json", UNIFORM)
    code, out, _ = run(["classify", "--game", g, "--p1", u, "--p2", u])
    rep = json.loads(out)
    assert rep["type"] == "a" and "warning" not in rep
    code, out, _ = run(["genericity", "--game", g])
    assert json.loads(out) == {"schema_version": "1", "command": "genericity", "generic": True, "witness": None}


def test_non_generic_warning(files):
    g = files("ng.json", {"payoffs": {"CC": [1, 1], "DD": [2, 2], "CD": [3, 3], "DC": [4, 4]}})
    u = files("u.json", UNIFORM)
    code, out, _ = run(["classify", "--game", g, "--p1", u, "--p2", u])
    assert code == 0 and "not generic" in json.loads(out)["warning"]
    code, out, _ = run(["find", "--game", g])
    assert code == 0 and "warning" in json.loads(out)


def test_oracle_command():
    code, out, _ = run(["oracle", "--samples", "200", "--seed", "1"])
    rep = json.loads(out)
    assert rep["product_rule_ok"] and rep["opt_out_uniform"]
    assert rep["product_rule_max_deviation"] <= 1e-10


def test_parse_error_exit_2(files):
    code, _, err = run(["genericity", "--game", files("bad.json", '{"payoffs": ')])
    assert code == 2
    assert "line 1" in json.loads(err)["message"]
    code, _, _ = run(["genericity", "--game", "/nonexistent/game.json"])
    assert code == 2


def test_validation_error_exit_3(files):
    g = files("pd.json", PD)
    bad = files("bad.json", {"atoms": [{"q": [1, 1, 0, 0], "w": 1.0}]})
    code, _, err = run(["verify", "--game", g, "--p1", bad, "--p2", bad])
    assert code == 3 and json.loads(err)["field"] == "atoms[0].q"
    short = files("short.json", {"atoms": [{"q": [1, 0, 0, 0], "w": 0.5}]})
    code, _, err = run(["verify", "--game", g, "--p1", short, "--p2", short])
    assert code == 3 and json.loads(err)["field"] == "w"


def test_text_format(files):
    code, out, _ = run(["best-response", "--game", files("pd.json", PD), "--player", "one",
                        "--p2", files("u.json", UNIFORM), "--format", "text"])
    assert code == 0
    assert "2.25  0  0  0" in out


def test_module_entry_point(files):
    g = files("pd.json", PD)
    res = subprocess.run([sys.executable, "-m", "ewlquat", "genericity", "--game", g], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["generic"] is True
