import json
import subprocess
import sys

import pytest

from tasmodels import dlm
from tasmodels.cli import main
from tasmodels.zoo import build_model


@pytest.fixture
def model_a(tmp_path):
    path = tmp_path / "modelA.dlm"
    dlm.dump(build_model("A"), path)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_model_a_tas1(capsys, model_a):
    code, out, _ = run(capsys, "check", model_a, "--scheme", "tas1")
    assert code == 0
    assert sum(line.startswith("PASS") for line in out.splitlines()) == 5


def test_check_model_a_tas3_fails(capsys, model_a):
    code, out, _ = run(capsys, "check", model_a, "--scheme", "tas3")
    assert code == 1
    assert "missing required predicate P" in out


def test_check_json(capsys, model_a):
    code, out, _ = run(capsys, "check", model_a, "--scheme", "tas2", "--json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1 and data["ok"]
    code, out, _ = run(capsys, "--json", "check", model_a, "--scheme", "tas2")
    assert json.loads(out)["kind"] == "check"


def test_check_with_extension_rejected_for_tas1(capsys, model_a):
    code, _, err = run(capsys, "check", model_a, "--scheme", "tas1", "--with-extension")
    assert code == 2 and "extension" in err


def test_prove_unsat(capsys):
    code, out, _ = run(capsys, "prove-unsat", "--scheme", "tas3", "--max-size", "4")
    lines = out.splitlines()
    assert code == 0
    assert [line.split()[0:2] for line in lines] == [[f"n={n}", "UNSAT"] for n in range(1, 5)]
    assert all("decisions=" in line and "propagations=" in line for line in lines)


def test_prove_unsat_fails_when_sat(capsys):
    code, out, _ = run(capsys, "prove-unsat", "--scheme", "tas1", "--max-size", "3", "--json")
    data = json.loads(out)
    assert code == 1 and not data["ok"]
    assert [r["sat"] for r in data["sizes"]] == [False, False, True]


def test_find(capsys, tmp_path):
    cnf = tmp_path / "p.cnf"
    code, out, _ = run(capsys, "find", "--scheme", "tas1", "--size", "3", "--dedup",
                       "--limit", "-1", "--dimacs", str(cnf))
    assert code == 0 and "1 model(s) found" in out
    assert cnf.read_text().startswith("c ")
    body = out.split("# 1 model(s) found")[0]
    s = dlm.loads(body)
    assert len(s.domain) == 3


def test_find_none(capsys):
    code, out, _ = run(capsys, "find", "--scheme", "tas3", "--size", "3", "--json")
    assert code == 1 and json.loads(out)["models"] == []


def test_zoo_round_trip_through_check(capsys, tmp_path):
    for model in ("a", "b", "d"):
        code, out, _ = run(capsys, "zoo", model, "--k", "4")
        assert code == 0
        path = tmp_path / f"{model}.dlm"
        path.write_text(out)
        assert run(capsys, "check", str(path), "--scheme", "tas2")[0] == 0


def test_zoo_c_window(capsys):
    code, out, _ = run(capsys, "zoo", "c", "--window", "3")
    s = dlm.loads(out)
    assert s.domain == (3, 4, 7, 8, 15, 16)


def test_zoo_large_d(capsys):
    code, out, _ = run(capsys, "zoo", "d", "--k", str(2**80), "--json")
    data = json.loads(out)
    assert code == 0 and str(2**80 + 1) in data["domain"]


def test_bounded(capsys):
    code, out, _ = run(capsys, "bounded", "--model", "c", "--scheme", "tas3",
                       "--with-extension", "--universal", "6", "--existential", "8")
    assert code == 0 and "PASS    Ext" in out
    code, out, _ = run(capsys, "bounded", "--model", "d", "--scheme", "tas2")
    assert code == 0


def test_derive_n(capsys, model_a, tmp_path):
    code, out, _ = run(capsys, "derive-n", model_a)
    assert code == 0 and out.startswith("N = {1, 2, 3}") and "matches" in out
    alt = tmp_path / "alt.dlm"
    dlm.dump(build_model("A", alternative_n=True), alt)
    code, out, _ = run(capsys, "derive-n", str(alt), "--json")
    data = json.loads(out)
    assert code == 1 and data["derived"] == [1, 2, 3] and data["declared"] == [1, 2]


def test_alternative_n_check(capsys, tmp_path):
    alt = tmp_path / "alt.dlm"
    dlm.dump(build_model("A", alternative_n=True), alt)
    assert run(capsys, "check", str(alt), "--scheme", "tas2")[0] == 1
    assert run(capsys, "check", str(alt), "--scheme", "tas2", "--no-cross-check")[0] == 0


def test_closure(capsys, tmp_path):
    code, out, _ = run(capsys, "closure", "--model", "a", "--premises", "2,3")
    assert code == 0 and out.strip() == "{1, 2, 3}"
    rules = tmp_path / "rules.txt"
    rules.write_text("# rules\np,q,r\n(r)\n")
    code, out, _ = run(capsys, "closure", "--rules", str(rules), "--premises", "p,q", "--json")
    assert code == 0 and json.loads(out)["closure"] == ["p", "q", "r"]
    assert run(capsys, "closure", "--model", "a", "--premises", "9")[0] == 2


def test_seq(capsys):
    code, out, _ = run(capsys, "seq", "--max-i", "2")
    assert code == 0
    assert out.splitlines() == ["i=0 a=3 b=4 c=7", "i=1 a=7 b=8 c=15", "i=2 a=15 b=16 c=31"]
    code, out, _ = run(capsys, "seq", "--max-i", "64", "--json")
    last = json.loads(out)["triples"][-1]
    assert last["c"] == str(2**67 - 1)


@pytest.mark.parametrize("argv", [
    ["bogus"],
    [],
    ["check"],
    ["find", "--scheme", "tas9", "--size", "3"],
    ["find", "--scheme", "tas1", "--size", "6", "--dedup"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.dlm"
    bad.write_text("domain: 1 2\nQ: (1)\n")
    code, _, err = run(capsys, "check", str(bad), "--scheme", "tas1")
    assert code == 3 and "line 2" in err
    assert run(capsys, "check", str(tmp_path / "missing.dlm"), "--scheme", "tas1")[0] == 3


def test_module_entry_point(model_a):
    proc = subprocess.run([sys.executable, "-m", "tasmodels", "check", model_a, "--scheme",
                           "tas1"], capture_output=True, text=True)
    assert proc.returncode == 0 and "all axioms hold" in proc.stdout
