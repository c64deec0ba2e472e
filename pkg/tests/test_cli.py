import json
from pathlib import Path

import pytest

from tropcurves.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_tropicalize_worked(capsys, tmp_path):
    dot = tmp_path / "curve.dot"
    code, out, _ = run(capsys, "tropicalize", DATA / "worked_example.json", "--emit-dot", dot)
    assert code == 0
    obj = json.loads(out)
    lengths = sorted(int(e[2][0]) for e in obj["curve"]["edges"] if e[2] != "inf")
    assert lengths == [1, 1, 2, 2, 2]
    assert "--" in dot.read_text()


def test_duplicate_point_exit_2(capsys):
    code, _, err = run(capsys, "tropicalize", DATA / "duplicate_point.json")
    assert code == 2
    assert json.loads(err)["error"]["kind"] == "duplicate_point"


def test_malformed_json_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "tropicalize", bad)
    assert code == 2 and json.loads(err)["error"]["kind"] == "malformed_json"


def test_precision_loss_exit_3(capsys, tmp_path):
    obj = json.loads((DATA / "worked_example.json").read_text())
    obj["c"][0] = "O(t^3)"
    f = tmp_path / "trunc.json"
    f.write_text(json.dumps(obj))
    code, _, err = run(capsys, "tropicalize", f)
    assert code == 3 and json.loads(err)["error"]["kind"] == "precision_loss"


def test_verify_worked_and_random(capsys):
    code, out, _ = run(capsys, "verify", DATA / "worked_example.json")
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run(capsys, "verify", "--random", 10, "--seed", 5)
    assert code == 0 and json.loads(out)["failures"] == 0


def test_verify_corrupted_curve(capsys, tmp_path):
    code, out, _ = run(capsys, "tropicalize", DATA / "worked_example.json")
    obj = json.loads(out)
    pos = obj["curve"]["positions"]
    key = sorted(pos)[-1]
    pos[key][0] = [str(int(pos[key][0][0]) + 1), "1"]
    f = tmp_path / "curve.json"
    f.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "verify", DATA / "worked_example.json", "--curve", f)
    assert code == 1
    assert json.loads(out)["diff"]


def test_pluecker(capsys):
    code, out, _ = run(capsys, "pluecker", DATA / "worked_example.json")
    assert code == 0 and json.loads(out)["consistent"]


def test_count_commands(capsys):
    code, out, _ = run(capsys, "count", "--r", 2, "--d", 1, "--random-points", "--seed", 42)
    assert code == 0 and json.loads(out)["degree"] == 1
    code, out, _ = run(capsys, "count", "--r", 3, "--d", 1, "--lines-file", DATA / "four_lines.json")
    assert code == 0 and json.loads(out)["degree"] == 2


def test_count_guard_rail(capsys):
    code, _, err = run(capsys, "count", "--r", 2, "--d", 3)
    assert code == 2 and "infeasible enumeration size" in json.loads(err)["error"]["message"]


def test_count_degenerate_exit_4(capsys):
    code, _, err = run(capsys, "count", "--r", 2, "--d", 1, "--points-file", DATA / "degenerate_points.json")
    assert code == 4 and json.loads(err)["error"]["kind"] == "degenerate"


def test_count_dimension_mismatch(capsys, tmp_path):
    f = tmp_path / "one.json"
    f.write_text(json.dumps([{"label": "p", "point": [0, 0]}]))
    code, _, err = run(capsys, "count", "--r", 2, "--d", 1, "--points-file", f)
    assert code == 2 and json.loads(err)["error"]["kind"] == "dimension_mismatch"


def test_output_identical_across_threads(capsys):
    _, a, _ = run(capsys, "count", "--r", 3, "--d", 1, "--random-lines", 4, "--seed", 3, "--threads", 1)
    _, b, _ = run(capsys, "count", "--r", 3, "--d", 1, "--random-lines", 4, "--seed", 3, "--threads", 2)
    assert a == b and json.loads(a)["degree"] == 2
