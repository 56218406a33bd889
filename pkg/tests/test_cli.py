import json
import subprocess
import sys

import pytest

from bpmeasures.boolfn import read_tt, write_tt
from bpmeasures.cli import main
from bpmeasures.errors import cell_budget, set_cell_budget
from bpmeasures.roster import gen_eq, gen_parity


@pytest.fixture(autouse=True)
def keep_budget():
    old = cell_budget()
    yield
    set_cell_budget(old)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


@pytest.fixture
def parity4(tmp_path):
    path = tmp_path / "parity4.tt"
    write_tt(gen_parity(4), path)
    return str(path)


def test_measure(capsys, parity4):
    code, rep = run(capsys, "measure", "-i", parity4, "-m", "S,Shat,C,P,CC")
    assert code == 0 and rep["schema"] == 1
    assert rep["values"] == {"S": 2, "Shat": 2, "C": 2, "P": 4, "CC": 2}
    assert [r["measure"] for r in rep["reports"]] == ["S", "S_hat", "C", "P", "CC"]


def test_measure_is_deterministic(capsys, parity4):
    a = run(capsys, "measure", "-i", parity4, "-m", "Sstar,Chat")
    b = run(capsys, "measure", "-i", parity4, "-m", "Sstar,Chat")
    assert a == b


def test_measure_errors(capsys, tmp_path, parity4):
    assert main(["measure", "-i", str(tmp_path / "missing.tt"), "-m", "S"]) == 1
    bad = tmp_path / "bad.tt"
    bad.write_text("TT 2 2 bool 0 1\n")
    assert main(["measure", "-i", str(bad), "-m", "S"]) == 1
    assert main(["measure", "-i", parity4, "-m", "Bogus"]) == 1
    capsys.readouterr()


def test_cell_budget_exit_code(capsys, tmp_path):
    path = tmp_path / "out.tt"
    assert main(["--cell-budget", "64", "roster", "eq", "4", "-o", str(path)]) == 2
    rep = json.loads(capsys.readouterr().out)
    assert rep["error"] == "budget"


def test_roster_writes_tables(capsys, tmp_path):
    path = tmp_path / "eq2.tt"
    assert main(["roster", "eq", "2", "-o", str(path)]) == 0
    assert read_tt(path) == gen_eq(2)
    assert main(["roster", "isa", "3"]) == 1
    capsys.readouterr()


def test_relations(capsys):
    code, rep = run(capsys, "relations", "--n", "2")
    assert code == 0
    code, _ = run(capsys, "relations", "--n", "2", "--corrupt", "C=100")
    assert code == 3


def test_obdd(capsys, tmp_path, parity4):
    dot = tmp_path / "p.dot"
    code, rep = run(capsys, "obdd", "-i", parity4, "--minimize", "--dot", str(dot))
    assert code == 0 and rep["size"] == 9
    assert dot.read_text().startswith("digraph")
    code, rep = run(capsys, "obdd", "-i", parity4, "--order", "4,3,2,1")
    assert rep["order"] == [4, 3, 2, 1] and rep["size"] == 9
    assert main(["obdd", "-i", parity4, "--order", "1,1,2,3"]) == 1


def test_tep(capsys):
    code, rep = run(capsys, "tep", "profile", "--h", "2", "--k", "2")
    assert code == 0
    assert [p["S_value"] for p in rep["profile"]] == [2, 3, 4, 4, 3, 2]
    code, rep = run(capsys, "tep", "shat", "--h", "2", "--k", "2")
    assert code == 0
    code, _ = run(capsys, "tep", "profile", "--h", "2", "--k", "3", "--budget", "0")
    assert code == 2


def test_tseitin(capsys, tmp_path):
    g, c = tmp_path / "g", tmp_path / "c"
    g.write_text("3 3\n1 2\n2 3\n3 1\n")
    c.write_text("0 0 0\n")
    code, rep = run(capsys, "tseitin", "--graph", str(g), "--charge", str(c), "--fact", "--bound", "--crosscheck")
    assert code == 0
    assert rep["count"] == rep["predicted"] == 2
    assert rep["kappa_profile"] == [3, 2, 1, 1] and rep["bound"] == 2
    c.write_text("0 1\n")
    assert main(["tseitin", "--graph", str(g), "--charge", str(c), "--fact"]) == 1
    capsys.readouterr()


def test_plane(capsys, tmp_path):
    code, rep = run(capsys, "plane", "--p", "3", "mbs", "--max-size", "5")
    assert code == 0 and rep["histogram"]["5"] == 27
    mask = tmp_path / "m"
    mask.write_text("1 1 1 1\n")
    code, rep = run(capsys, "plane", "--p", "2", "blocking-count", "--mask", str(mask))
    assert rep["count"] == 7
    code, rep = run(capsys, "plane", "--p", "5", "construct", "--case", "7")
    assert code == 0 and rep["size"] == 11
    assert main(["plane", "--p", "3", "construct", "--case", "3"]) == 3
    code, rep = run(capsys, "plane", "--p", "3", "lemmas")
    assert rep["identity"] and rep["colinear_triples"]["ok"]
    assert main(["plane", "--p", "4", "lemmas"]) == 1
    capsys.readouterr()


def test_gen(capsys, tmp_path):
    circ = tmp_path / "and.circ"
    circ.write_text("a INPUT 1\nb INPUT 2\nc AND a b\nc\n")
    code, rep = run(capsys, "gen", "verify", "--circuit", str(circ))
    assert code == 0 and rep["ok"] and rep["m"] == 9
    code, rep = run(capsys, "gen", "project", "--circuit", str(circ))
    assert rep["q"] == 36
    table = tmp_path / "gen.txt"
    table.write_text("3\n2 3 1\n")
    code, rep = run(capsys, "gen", "eval", "--table", str(table))
    assert rep["value"] == 1
    table.write_text("3\n2 3\n")
    assert main(["gen", "eval", "--table", str(table)]) == 1
    capsys.readouterr()


def test_suite_exit_codes(capsys):
    code, rep = run(capsys, "suite", "tseitin")
    assert code == 0 and rep["ok"]


def test_console_script_runs():
    res = subprocess.run([sys.executable, "-m", "bpmeasures.cli", "roster", "parity", "2"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.split()[:4] == ["TT", "2", "2", "bool"]
