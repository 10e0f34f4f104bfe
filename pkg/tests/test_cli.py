import csv
import io
import json
import random

import pytest

from digraphsearch.cli import main, run, verify_report
from digraphsearch.experiments import CSV_HEADER
from digraphsearch.problem import ProblemSpec

from support import random_spec

CENTRALISER = {"degree": 6, "constraints": [{"kind": "centralise", "perm": "(1,2)(3,6,5)"}], "goal": "all"}


def _write(tmp_path, obj, name="spec.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


@pytest.mark.parametrize("goal", ["all", "single", "group"])
def test_solve_goals(tmp_path, capsys, goal):
    path = _write(tmp_path, CENTRALISER)
    assert main(["solve", "--spec", path, "--goal", goal, "--oracle"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["goal"] == goal and report["oracle"] == {"count": 6, "agrees": True}
    res = report["result"]
    if goal == "all":
        assert res["count"] == 6 and "(1,2)(3,6,5)" in res["elements"]
    elif goal == "single":
        assert res["element"] is not None
    else:
        assert res["order"] == 6 and res["representative"] == "()" and not res["empty"]
    assert verify_report(ProblemSpec.from_json({**CENTRALISER, "goal": goal}), report)


def test_stats_out_and_mode_override(tmp_path, capsys):
    path = _write(tmp_path, {**CENTRALISER, "seed": 7})
    stats = tmp_path / "stats.json"
    assert main(["solve", "--spec", path, "--mode", "leon", "--stats-out", str(stats)]) == 0
    report = json.loads(capsys.readouterr().out)
    saved = json.loads(stats.read_text())
    assert report["mode"] == "leon" and saved["mode"] == "leon" and saved["seed"] == 7
    assert saved["nodes"] == report["nodes"]


def test_bad_specs_exit_two(tmp_path, capsys):
    for bad in ({"degree": 0}, {"degree": 3, "constraints": [{"kind": "nope"}]},
                {"degree": 3, "constraints": [{"kind": "set_stab", "set": [4]}]}):
        assert main(["solve", "--spec", _write(tmp_path, bad)]) == 2
    assert main(["solve", "--spec", str(tmp_path / "missing.json")]) == 2
    (tmp_path / "broken.json").write_text("{")
    assert main(["solve", "--spec", str(tmp_path / "broken.json")]) == 2
    capsys.readouterr()


def test_oracle_disagreement_exit_one(tmp_path, capsys, monkeypatch):
    import digraphsearch.cli as cli
    monkeypatch.setattr(cli, "oracle", lambda n, c: [])
    assert main(["solve", "--spec", _write(tmp_path, CENTRALISER), "--oracle"]) == 1
    capsys.readouterr()


def test_reports_round_trip():
    rng = random.Random(61)
    for i in range(45):
        obj = random_spec(rng, i)
        obj["mode"] = ("leon", "orbital", "strong", "full")[i % 4]
        spec = ProblemSpec.from_json(obj)
        report, _ = run(spec, with_oracle=True)
        assert report["oracle"]["agrees"]
        again = json.loads(json.dumps(report))
        assert verify_report(spec, again)


def test_tampered_report_fails_verification():
    spec = ProblemSpec.from_json({"degree": 4, "constraints": [{"kind": "set_stab", "set": [1, 2]}]})
    report, _ = run(spec)
    report["result"]["elements"].append("(1,3)")
    assert not verify_report(spec, report)


def _grid_csv(capsys, seed):
    assert main(["experiment", "grid", "--n", "4", "--kind", "iii", "--count", "4", "--mode", "strong",
                 "--seed", str(seed)]) == 0
    return capsys.readouterr().out


def test_experiment_csv_and_determinism(capsys):
    a, b = _grid_csv(capsys, 3), _grid_csv(capsys, 3)
    rows = list(csv.reader(io.StringIO(a)))
    assert tuple(rows[0]) == CSV_HEADER and len(rows) == 5
    strip = lambda text: [r[:6] for r in csv.reader(io.StringIO(text))]  # noqa: E731
    assert strip(a) == strip(b)


def test_experiment_subdirect_and_errors(capsys, tmp_path):
    out = tmp_path / "sd.csv"
    assert main(["experiment", "subdirect", "--k", "2", "--n", "3", "--count", "2", "--out", str(out)]) == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert len(rows) == 1 + 2 * 4
    assert main(["experiment", "grid", "--n", "5", "--kind", "iii", "--count", "1"]) == 2
    capsys.readouterr()


def test_parallel_matches_serial(capsys):
    args = ["experiment", "grid", "--n", "4", "--kind", "ii", "--count", "3", "--mode", "all"]
    assert main(args) == 0
    serial = capsys.readouterr().out
    assert main(args + ["--jobs", "2"]) == 0
    parallel = capsys.readouterr().out
    strip = lambda text: [r[:6] for r in csv.reader(io.StringIO(text))]  # noqa: E731
    assert strip(serial) == strip(parallel)
