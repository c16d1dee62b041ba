"""
Tests for the command-line frontend.
"""

import io
import json

import pytest

from stacksort_bijection.cli import EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED, run

EXAMPLE = "3 4 1 6 8 2 5 7 9 12 10 11"


def test_map(capsys):
    assert run(["map", *EXAMPLE.split()]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "12 6 11 8 9 10 7 1 2 5 4 3"


def test_map_inverse_and_step(capsys):
    assert run(["map", "--inverse", "12", "6", "11", "8", "9", "10", "7", "1", "2", "5", "4", "3"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == EXAMPLE
    assert run(["map", "--step", "rho", EXAMPLE]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "EEENEEENNNENNENNENEENENN"


def test_map_trace_json(capsys):
    assert run(["map", "--format", "json", "231"]) == EXIT_OK
    body = json.loads(capsys.readouterr().out)
    assert body["input"] == "2 3 1"
    assert body["dyck"] == "EEENNN"


def test_map_reads_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("# two inputs\n123\n2 3 1\n"))
    assert run(["map", "--format", "json"]) == EXIT_OK
    body = json.loads(capsys.readouterr().out)
    assert [item["input"] for item in body] == ["1 2 3", "2 3 1"]


def test_map_rejects_321(capsys):
    assert run(["map", "3", "2", "1"]) == EXIT_USAGE
    assert "contains 321" in capsys.readouterr().err


def test_sort(capsys):
    assert run(["sort", "845962173"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "4 5 8 1 2 6 3 7 9"
    assert lines[-1] == "sort_depth: 4"
    assert len(lines) == 5


def test_stats(capsys):
    assert run(["stats", "--format", "json", EXAMPLE]) == EXIT_OK
    body = json.loads(capsys.readouterr().out)
    assert (body["fix"], body["drop"], body["mlw"], body["sort_depth"]) == (1, 6, 4, 4)


def test_enumerate_csv(capsys):
    assert run(["enumerate", "--n", "1-5", "--t", "1", "--format", "csv"]) == EXIT_OK
    out = capsys.readouterr().out
    rows = [line for line in out.splitlines() if not line.startswith("#")]
    assert rows[0] == "n,t,count"
    assert [int(r.split(",")[-1]) for r in rows[1:]] == [1, 2, 5, 14, 42]


def test_enumerate_to_file(tmp_path, capsys):
    target = tmp_path / "table.json"
    code = run(["enumerate", "--n", "4", "--patterns", "321", "--stats", "fix", "drop",
                "--format", "json", "--out", str(target)])
    assert code == EXIT_OK
    assert capsys.readouterr().out == ""
    body = json.loads(target.read_text(encoding="utf-8"))
    assert sum(row["count"] for row in body["rows"]) == 14


def test_verify_subset(capsys):
    code = run(["verify", "--n", "4", "--only", "catalan_counts", "worked_examples"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "PASS  catalan_counts" in out
    assert out.strip().endswith("OK")


def test_render(capsys):
    assert run(["render", "--format", "dot", "213"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("digraph T {")
    assert run(["render", "213"]) == EXIT_OK
    assert "EENNEN" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["render", "--format", "csv", "213"],
    ["enumerate", "--t", "1"],
    ["enumerate", "--n", "x"],
    ["verify", "--only", "no_such_check"],
    ["map", "1", "1"],
    ["frobnicate"],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == EXIT_USAGE
    assert capsys.readouterr().err


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_VERIFY_FAILED, EXIT_USAGE}) == 3


def test_input_file(tmp_path, capsys):
    path = tmp_path / "perms.txt"
    path.write_text("# sample\n2 3 1\n\n123\n", encoding="utf-8")
    assert run(["sort", "--format", "json", "--input", str(path)]) == EXIT_OK
    body = json.loads(capsys.readouterr().out)
    assert [item["sort_depth"] for item in body] == [2, 0]


def test_input_file_errors(tmp_path, capsys):
    assert run(["map", "--input", str(tmp_path / "missing.txt")]) == EXIT_USAGE
    assert capsys.readouterr().err
    path = tmp_path / "perms.txt"
    path.write_text("2 3 1\n", encoding="utf-8")
    assert run(["map", "--input", str(path), "2", "3", "1"]) == EXIT_USAGE
    assert "not both" in capsys.readouterr().err


def test_enumerate_from_saved_table(tmp_path, capsys):
    target = tmp_path / "table.csv"
    assert run(["enumerate", "--n", "3-4", "--patterns", "321", "--stats", "fix",
                "--format", "csv", "--out", str(target)]) == EXIT_OK
    capsys.readouterr()
    assert run(["enumerate", "--from-table", str(target), "--format", "json"]) == EXIT_OK
    body = json.loads(capsys.readouterr().out)
    assert sum(row["count"] for row in body["rows"]) == 5 + 14
    assert run(["enumerate", "--n", "3", "--from-table", str(target)]) == EXIT_USAGE
