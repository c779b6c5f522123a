import subprocess
import sys
from pathlib import Path

import pytest

from gamemistakes.cli import main
from gamemistakes.zoo import kuhn, rps, rpsq

GOLDEN = Path(__file__).parent / "golden"


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def records(text):
    rows = []
    for line in text.splitlines():
        fields = dict(part.split("=", 1) for part in line.split())
        rows.append(fields)
    return rows


@pytest.fixture
def files(tmp_path):
    (tmp_path / "rps.txt").write_text(rps().to_text())
    (tmp_path / "rpsq.txt").write_text(rpsq().to_text())
    (tmp_path / "kuhn3.tree").write_text(kuhn(3).to_text())
    (tmp_path / "bad.txt").write_text("2 2\n1 2\n3\n")
    (tmp_path / "bad.tree").write_text("root a\nnode a chance {b:1/2}\nnode b terminal 1\n")
    (tmp_path / "broken.tree").write_text("root a\nnode a wibble\n")
    return tmp_path


def test_solve_matrix(files, capsys):
    code, out, _ = run(["solve", "--matrix", str(files / "rps.txt"), "--output", "records"],
                       capsys)
    assert code == 0
    recs = records(out)
    assert {"record": "value", "player": "1", "value": "0"} in recs
    probs = [r["prob"] for r in recs if r["record"] == "witness" and r["player"] == "1"]
    assert probs == ["1/3"] * 3


def test_solve_tree(files, capsys):
    code, out, _ = run(["solve", "--tree", str(files / "kuhn3.tree")], capsys)
    assert code == 0 and "value (player 1): -1/18" in out


def test_analyze_rpsq_file(files, capsys):
    code, out, _ = run(["analyze", "--matrix", str(files / "rpsq.txt"), "--player", "1",
                        "--strong", "--output", "records"], capsys)
    assert code == 0
    q = [r for r in records(out) if r["record"] == "strategy" and r["index"] == "3"][0]
    assert (q["weakly_dominated"], q["mistake"], q["strong_mistake"]) == ("1", "0", "1")
    assert q["max_prob"] == "1/3" and q["strong_max_prob"] == "0"


def test_analyze_tree_text(files, capsys):
    code, out, _ = run(["analyze", "--tree", str(files / "kuhn3.tree"), "--mode", "strict"],
                       capsys)
    assert code == 0
    assert "player 2 actions (iterated elimination: strict)" in out


@pytest.mark.parametrize("argv, name", [
    (["rpsq", "--strong", "--output", "records"], "rpsq_records.txt"),
    (["kuhn", "--n", "4", "--strong", "--output", "records"], "kuhn4_records.txt"),
])
def test_golden_records(argv, name, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out == (GOLDEN / name).read_text()


def test_records_are_byte_identical(capsys):
    argv = ["random", "--m", "5", "--seed", "42", "--strong", "--output", "records"]
    assert run(argv, capsys) == run(argv, capsys)


def test_table2(capsys):
    code, out, _ = run(["table2", "--n", "4,5,10", "--threads", "1"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["n", "4", "5", "10"]
    assert lines[3].split()[-3:] == ["5", "5", "11"]
    assert lines[4].split()[-3:] == ["4", "7", "14"]
    code, out, _ = run(["table2", "--n", "4", "--output", "records"], capsys)
    assert records(out)[0]["mistakes_p2"] == "4"


def test_table1(capsys):
    code, out, _ = run(["table1", "--m", "3", "--trials", "20", "--seed", "3",
                        "--threads", "1", "--output", "records"], capsys)
    assert code == 0
    rec = records(out)[0]
    assert rec["record"] == "table1" and rec["trials"] == "20" and rec["seed"] == "3"
    assert rec["avg_sds"] == rec["avg_wds"]


def test_decimal_display(capsys):
    code, out, _ = run(["kuhn", "--n", "3", "--decimal", "3", "--player", "1"], capsys)
    assert code == 0 and "value (player 1): -0.056" in out
    assert "player 2 actions" not in out


def test_help_exits_zero(capsys):
    assert run(["--help"], capsys)[0] == 0


@pytest.mark.parametrize("argv", [
    [], ["frobnicate"], ["solve"], ["rpsq", "--bogus"], ["rpsq", "--player", "3"],
    ["table2", "--n", "x"], ["table1", "--trials", "0"], ["random", "--seed", "-1"],
    ["solve", "--matrix", "a", "--tree", "b"], ["table2", "--n", "3"], ["table1", "--m", "1"],
    ["kuhn", "--n", "1"],
])
def test_usage_errors(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 1 and out == "" and err


@pytest.mark.parametrize("argv", [
    ["solve", "--matrix", "missing.txt"],
    ["analyze", "--matrix", "bad.txt"],
    ["solve", "--tree", "bad.tree"],
    ["analyze", "--tree", "broken.tree"],
])
def test_malformed_input(argv, files, capsys):
    argv = [a if not a.endswith((".txt", ".tree")) else str(files / a) for a in argv]
    code, out, err = run(argv, capsys)
    assert code == 2 and out == "" and err.startswith("gamemistakes:")


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "gamemistakes", "solve", "--matrix",
                           str(files / "rps.txt")], capture_output=True, text=True)
    assert proc.returncode == 0 and "value (player 1): 0" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "gamemistakes", "solve"],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and proc.stderr
