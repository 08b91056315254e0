import json
import subprocess
import sys

import pytest

from restruct.cli import cmd_restructure, cmd_solve, cmd_trajectory, main
from restruct.io import dumps, load_document, parse_document
from restruct import InputError

from fx import NAMES, doc, path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


# documents ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", NAMES)
def test_round_trip(name):
    d = load_document(path(name))
    again = parse_document(json.loads(json.dumps(d.to_json())))
    assert again == d


@pytest.mark.parametrize(
    "data, field",
    [
        ([], "document"),
        ({"kind": "origami", "stages": [{}]}, "kind"),
        ({"kind": "knapsack", "stages": []}, "stages"),
        ({"kind": "knapsack", "stages": [{"capacity": "1"}]}, "stages[0].items"),
        (
            {"kind": "knapsack", "stages": [{"capacity": "1", "items": [{"id": 1, "profit": 1.25, "weight": "1"}]}]},
            "stages[0].items[0].profit",
        ),
    ],
)
def test_parse_errors_name_the_field(data, field):
    with pytest.raises(InputError, match=field.replace("[", r"\[").replace("]", r"\]")):
        parse_document(data)


def test_malformed_file_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "knapsack", "stages": [')
    code, out, err = run(capsys, "solve", bad)
    assert code == 2 and out == ""
    assert "line 1" in err


def test_bad_field_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "knapsack", "stages": [{"capacity": "x", "items": []}]}))
    code, _, err = run(capsys, "solve", bad)
    assert code == 2 and "stages[0].capacity" in err


def test_missing_file_exits_2(tmp_path, capsys):
    code, _, err = run(capsys, "solve", tmp_path / "nope.json")
    assert code == 2 and "nope.json" in err


def test_too_large_for_the_oracle_exits_4(tmp_path, capsys):
    items = [{"id": i, "profit": "1", "weight": "1"} for i in range(25)]
    big = tmp_path / "big.json"
    big.write_text(json.dumps({"kind": "knapsack", "stages": [{"capacity": "3", "items": items}]}))
    assert run(capsys, "solve", big)[0] == 0
    assert run(capsys, "solve", big, "--oracle")[0] == 4


# solve ---------------------------------------------------------------------------------


def test_solve_course(capsys):
    r = report(capsys, "solve", path("course"), "--oracle")
    assert r["solution"]["ids"] == [1, 2, 4, 8, 11, 12, 13]
    assert r["objective"] == "22.0"
    assert r["oracle"]["verdict"] == "match"


def test_solve_team_stage_one(capsys):
    r = report(capsys, "solve", path("team"), "--stage", 1, "--oracle")
    assert "(3;4,0,0)" in {c["N"] for c in r["front"]}
    assert r["oracle"]["verdict"] == "match"


@pytest.mark.parametrize("name", [n for n in NAMES if n != "access"])
def test_every_fixture_solves_with_oracle_agreement(name):
    for i in range(len(doc(name).stages)):
        r = cmd_solve(doc(name), i, oracle=True)
        assert r["oracle"]["verdict"] in ("match", "not-available")


def test_capacitated_assignment_has_no_stage_optimum(capsys):
    # the access-point stages carry ops and capacities, not a square matrix
    code, _, err = run(capsys, "solve", path("access"))
    assert code == 2 and "stages[0].profit" in err


# restructure ---------------------------------------------------------------------------


def test_sensor_budget_two(capsys):
    r = report(capsys, "restructure", path("sensor"), "--from", 0, "--to", 1, "--budget", 2)
    assert r["plan"]["solution"]["chosen"] == ["R4", "P2", "D2", "Q1"]


def test_sensor_budget_zero_is_an_empty_plan(capsys):
    r = report(capsys, "restructure", path("sensor"), "--from", 0, "--to", 1, "--budget", 0)
    assert r["plan"]["ops"] == [] and r["plan"]["H"] == "0.0"


def test_access_with_oracle(capsys):
    r = report(capsys, "restructure", path("access"), "--from", 0, "--to", 1, "--budget", 5, "--oracle")
    assert [op["op"] for op in r["plan"]["ops"]] == ["op2", "op3"]
    assert r["oracle"]["verdict"] == "match"


@pytest.mark.parametrize("name", NAMES)
def test_every_fixture_restructures_with_oracle_agreement(name):
    d = doc(name)
    to = 1 if len(d.stages) > 1 else 0
    r = cmd_restructure(d, 0, to, None, None, oracle=True)
    assert r["oracle"]["verdict"] == "match"


def test_infeasible_budget_exits_3_with_a_hint(capsys):
    code, _, err = run(capsys, "restructure", path("ranking"), "--from", 0, "--to", 1, "--budget", 0)
    assert code == 3 and "budget" in err


def test_diff_is_in_the_report(capsys):
    r = report(capsys, "restructure", path("spanning-tree"), "--from", 0, "--to", 1)
    assert r["plan"]["diff"] == {"deleted": [[1, 6], [5, 6]], "added": [[2, 3], [2, 6]]}


# trajectory ----------------------------------------------------------------------------


def test_team_scheme_three(capsys):
    r = report(capsys, "trajectory", path("team"), "--scheme", 3)
    (best,) = r["trajectories"]
    assert best["labels"] == ["T0_1", "T*1_1", "T*2_1"]
    assert best["rho_total"] == [4, 3]
    assert len(r["considered"]) == 2


def test_single_stage_document_gives_one_plan(tmp_path):
    d = doc("sensor")
    one = parse_document({"kind": d.kind, "stages": [d.stages[1]]})
    r = cmd_trajectory(one, 1)
    assert len(r["trajectories"]) == 1
    assert len(r["trajectories"][0]["steps"]) == 1


def test_course_series(capsys):
    r = report(capsys, "trajectory", path("course"), "--scheme", 1, "--budgets", "1.8,1.8")
    (t,) = r["trajectories"]
    assert len(t["labels"]) == 3
    assert t["steps"][0]["solution"]["ids"] == [1, 2, 3, 4, 8, 11, 13]


def test_bad_scheme_flags(capsys):
    assert run(capsys, "trajectory", path("course"), "--budgets", "1.8")[0] == 2
    assert run(capsys, "trajectory", path("team"), "--scheme", 2, "--candidates", "x,1")[0] == 2


# output ------------------------------------------------------------------------------------


def test_text_output_is_readable(capsys):
    code, out, _ = run(capsys, "restructure", path("course"), "--from", 0, "--to", 1, "--budget", "1.6")
    assert code == 0
    assert "diff: -[12] +[3]" in out


@pytest.mark.parametrize("name", NAMES)
def test_json_reports_are_byte_stable(name):
    d = doc(name)
    a = dumps(cmd_trajectory(d, 1))
    b = dumps(cmd_trajectory(load_document(path(name)), 1))
    assert a == b


def test_console_script_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "restruct.cli", "solve", str(path("course")), "--format", "json"],
        capture_output=True,
        text=True,
        check=True,
    ).stdout
    assert json.loads(out)["objective"] == "22.0"


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("scheme", [1, 2, 3])
def test_every_scheme_runs_on_every_fixture(name, scheme):
    # assignment states are dicts and partitions nested lists; both must dedup
    r = cmd_trajectory(doc(name), scheme)
    assert r["trajectories"]
