import json
from pathlib import Path

import jsonschema
import pytest

from cli import EXIT_BUDGET, EXIT_ERROR, EXIT_FALSE, EXIT_OK, run
from graphs import cycle_graph, edge_ideal

SCHEMA = json.loads((Path(__file__).parent / "report.schema.json").read_text())


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("MORSECELL_JOBS", "MORSECELL_BUDGET", "MORSECELL_LOG_LEVEL", "MORSECELL_CACHE",
                 "MORSECELL_PROGRESS"):
        monkeypatch.delenv(name, raising=False)


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    report = json.loads(out) if out.strip() else None
    if report is not None:
        jsonschema.validate(instance=report, schema=SCHEMA)
        assert report["exit_code"] == code
    return code, report


def test_schema_is_valid():
    jsonschema.Draft7Validator.check_schema(SCHEMA)


def test_schema_rejects_unknown_exit_code():
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(instance={"command": "ideal betti", "exit_code": 7, "result": None}, schema=SCHEMA)


@pytest.fixture
def c4_file(tmp_path):
    path = tmp_path / "c4.json"
    edge_ideal(cycle_graph(4)).dump(path)
    return str(path)


def test_check_bridge_friendly_refuted(capsys, c4_file):
    code, report = invoke(capsys, "check", "bridge-friendly", "-i", c4_file, "--order", "x1*x4,x1*x2,x2*x3,x3*x4")
    assert code == EXIT_FALSE
    assert report["command"] == "check bridge-friendly"
    assert report["result"]["bridge_friendly"] is False
    assert len(report["result"]["obstruction"]["tau"]) >= 2


def test_check_lyubeznik_reports_witness(capsys):
    code, report = invoke(capsys, "check", "lyubeznik", "-g", "cycle:4", "--order", "x1*x2,x2*x3,x3*x4,x1*x4")
    assert code == EXIT_FALSE
    assert report["result"]["minimal"] is False
    assert report["result"]["bridge"] in report["result"]["cell"]


def test_check_bm_on_path(capsys):
    code, report = invoke(capsys, "check", "bm", "-g", "path:3", "--order", "x1*x2,x2*x3")
    assert code == EXIT_OK
    assert report["result"]["cell_totals"] == report["result"]["betti_totals"] == [1, 2, 1]


def test_recognize_labc(capsys):
    code, report = invoke(capsys, "graph", "recognize", "--labc", "-g", "diamond")
    assert code == EXIT_OK
    assert report["result"] == {"a": 0, "b": 0, "c": 2}


def test_recognize_bf_refuted(capsys):
    code, report = invoke(capsys, "graph", "recognize", "--bf", "-g", "k4")
    assert code == EXIT_FALSE
    assert report["result"] is None


def test_graph_enumerate(capsys):
    code, report = invoke(capsys, "graph", "enumerate", "-n", "4")
    assert code == EXIT_OK
    assert report["result"]["count"] == 6


def test_betti(capsys):
    code, report = invoke(capsys, "ideal", "betti", "-g", "cycle:4")
    assert code == EXIT_OK
    assert report["result"]["totals"] == [1, 4, 4, 1]


def test_power(capsys):
    code, report = invoke(capsys, "ideal", "power", "-g", "cycle:3", "-n", "2")
    assert code == EXIT_OK
    assert len(report["result"]["gens"]) == 6


@pytest.mark.parametrize("graph, budget, expected", [
    ("cycle:5", None, EXIT_OK),
    ("cycle:4", None, EXIT_FALSE),
    ("cycle:4", "3", EXIT_BUDGET),
])
def test_search_exit_codes(capsys, graph, budget, expected):
    argv = ["search", "bridge-friendly", "-g", graph]
    if budget is not None:
        argv += ["--budget", budget]
    code, report = invoke(capsys, *argv)
    assert code == expected
    if expected == EXIT_BUDGET:
        assert report["result"]["stats"]["next_rank"] == 3


def test_search_budget_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("MORSECELL_BUDGET", "2")
    code, report = invoke(capsys, "search", "bridge-friendly", "-g", "cycle:4")
    assert code == EXIT_BUDGET
    assert report["result"]["stats"]["examined"] == 2


def test_search_with_cache(capsys, tmp_path):
    cache = str(tmp_path / "cache.db")
    assert invoke(capsys, "search", "bridge-friendly", "-g", "cycle:4", "--budget", "4", "--cache", cache)[0] == EXIT_BUDGET
    code, report = invoke(capsys, "search", "bridge-friendly", "-g", "cycle:4", "--cache", cache)
    assert code == EXIT_FALSE
    assert report["result"]["stats"]["examined"] == 24


def test_verify_suite(capsys):
    code, report = invoke(capsys, "verify", "example-2.2")
    assert code == EXIT_OK
    assert report["result"]["status"] == "verified"
    assert report["result"]["suites"][0]["suite"] == "example-2.2"


def test_verify_list(capsys):
    code, report = invoke(capsys, "verify", "--list")
    assert code == EXIT_OK
    assert "prop-4.2" in {s["id"] for s in report["result"]}


@pytest.mark.parametrize("argv", [
    ["verify", "no-such-suite"],
    ["check", "lyubeznik", "-g", "cycle:4", "--order", "x1*x2,x2*x3"],
    ["check", "lyubeznik", "--order", "x1*x2"],
    ["ideal", "power", "-g", "cycle:4", "-n", "0"],
    ["graph", "build", "-g", "dodecahedron"],
    [],
])
def test_errors_exit_two(capsys, argv):
    assert invoke(capsys, *argv)[0] == EXIT_ERROR


def test_bad_environment(capsys, monkeypatch):
    monkeypatch.setenv("MORSECELL_JOBS", "abc")
    assert invoke(capsys, "ideal", "betti", "-g", "path:3")[0] == EXIT_ERROR


def test_help_exits_zero(capsys):
    assert run(["--help"]) == EXIT_OK
