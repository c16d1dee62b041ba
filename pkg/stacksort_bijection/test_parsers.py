"""
Tests for the permutation and count table parsers.
"""

import io

import pytest

from stacksort_bijection.core.enumerate_verify import count_table
from stacksort_bijection.core.errors import PermutationParseError
from stacksort_bijection.parsers.parse_permutation import (
    parse_permutation_file,
    parse_permutation_lines,
    parse_permutation_stream,
)
from stacksort_bijection.parsers.parse_table import (
    parse_table_csv,
    parse_table_file,
    parse_table_json,
)


def test_lines_skip_blanks_and_comments():
    perms = parse_permutation_lines(["# header\n", "2 3 1\n", "\n", "  ", "1,2\n"])
    assert [p.values for p in perms] == [(2, 3, 1), (1, 2)]


def test_line_number_in_error():
    with pytest.raises(PermutationParseError, match="line 3") as info:
        parse_permutation_lines(["1 2", "# ok", "1 1"])
    assert info.value.token == "1"


def test_stream():
    perms = parse_permutation_stream(io.StringIO("3 1 2\n213\n"))
    assert [p.compact() for p in perms] == ["312", "213"]


def test_file(tmp_path):
    path = tmp_path / "perms.txt"
    path.write_text("3 4 1 6 8 2 5 7 9 12 10 11\n", encoding="utf-8")
    perms = parse_permutation_file(str(path))
    assert len(perms) == 1 and len(perms[0]) == 12
    with pytest.raises(FileNotFoundError):
        parse_permutation_file(str(tmp_path / "missing.txt"))


@pytest.fixture
def table():
    return count_table([3, 4], [1, None], patterns=[(3, 2, 1)], statistics=["fix", "drop"])


def test_csv_table_reads_back(table):
    parsed = parse_table_csv(table.to_csv())
    assert parsed == table


def test_json_table_reads_back(table):
    assert parse_table_json(table.to_json()) == table


def test_table_file_by_suffix(tmp_path, table):
    csv_path = tmp_path / "table.csv"
    json_path = tmp_path / "table.json"
    csv_path.write_text(table.to_csv(), encoding="utf-8")
    json_path.write_text(table.to_json(), encoding="utf-8")
    assert parse_table_file(str(csv_path)).rows == table.rows
    assert parse_table_file(str(json_path)).rows == table.rows


@pytest.mark.parametrize("text, message", [
    ("# patterns: 321\n", "no header"),
    ("n,count\n3,5\n", "unexpected table header"),
    ("n,t,count\n3,1\n", "does not match header"),
])
def test_csv_table_errors(text, message):
    with pytest.raises(ValueError, match=message):
        parse_table_csv(text)
