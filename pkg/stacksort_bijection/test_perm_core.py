"""
Tests for permutations, pattern search, stack sorting and statistics.
"""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stacksort_bijection.core import perm_core as pc
from stacksort_bijection.core.errors import (
    PatternWitnessError,
    PermutationError,
    PermutationParseError,
)
from stacksort_bijection.core.perm_core import Permutation, parse_permutation

EXAMPLE_321 = Permutation([3, 4, 1, 6, 8, 2, 5, 7, 9, 12, 10, 11])
EXAMPLE_213 = Permutation([12, 6, 11, 8, 9, 10, 7, 1, 2, 5, 4, 3])

small_perms = st.integers(min_value=0, max_value=8).flatmap(
    lambda n: st.permutations(list(range(1, n + 1))))


@pytest.mark.parametrize("text, expected", [
    ("3 1 2", (3, 1, 2)),
    ("3,1,2", (3, 1, 2)),
    ("3, 1, 2", (3, 1, 2)),
    ("312", (3, 1, 2)),
    ("  1  ", (1,)),
    ("", ()),
    ("3 4 1 6 8 2 5 7 9 12 10 11", EXAMPLE_321.values),
])
def test_parse_permutation(text, expected):
    assert parse_permutation(text).values == expected


@pytest.mark.parametrize("text, token", [
    ("1 1", "1"),
    ("0 1", "0"),
    ("1 x", "x"),
    ("2 3", "3"),
    ("1,,2", ""),
])
def test_parse_permutation_errors_name_token(text, token):
    with pytest.raises(PermutationParseError) as info:
        parse_permutation(text)
    assert info.value.token == token


def test_permutation_validation():
    with pytest.raises(PermutationError, match="duplicate"):
        Permutation([1, 1])
    with pytest.raises(PermutationError, match="out of range"):
        Permutation([1, 3])


def test_permutation_basics():
    p = Permutation([2, 3, 1])
    assert str(p) == "2 3 1"
    assert p.compact() == "231"
    assert p.at(1) == 2
    assert p.position(1) == 3
    assert p.inverse() == (3, 1, 2)
    assert Permutation.identity(4).is_identity()
    assert sorted([Permutation([2, 1]), Permutation([1, 2])])[0] == (1, 2)
    assert {Permutation([1, 2]), Permutation([1, 2])} == {Permutation([1, 2])}


def test_patterns():
    assert pc.long_cycle_pattern(2) == (2, 3, 4, 1)
    assert pc.increasing_pattern(3) == (1, 2, 3)
    assert pc.find_occurrence([3, 2, 1], [3, 2, 1]) == (1, 2, 3)
    assert pc.find_occurrence([1, 2, 3], [2, 1]) is None
    assert pc.contains([2, 4, 1, 3], [2, 1])
    assert pc.avoids([2, 3, 1], [3, 2, 1])
    assert pc.avoids_all([1, 2, 3], [[2, 1], [3, 2, 1]])


def test_require_avoids_carries_witness():
    with pytest.raises(PatternWitnessError) as info:
        pc.require_avoids([4, 3, 1, 2], [3, 2, 1])
    witness = info.value.witness
    assert witness["pattern"] == [3, 2, 1]
    assert witness["values"] == [4, 3, 1]
    assert witness["positions"] == [1, 2, 3]


def test_contains_matches_reference_on_s6():
    patterns = [(2, 1, 3), (3, 2, 1), (2, 3, 4, 1)]
    for values in itertools.permutations(range(1, 7)):
        for pattern in patterns:
            assert pc.contains(values, pattern) == pc.contains_naive(values, pattern)


def test_stack_sort_examples():
    assert pc.stack_sort([2, 3, 1]) == (2, 1, 3)
    assert pc.stack_sort([8, 4, 5, 9, 6, 2, 1, 7, 3]) == (4, 5, 8, 1, 2, 6, 3, 7, 9)
    assert pc.stack_sort([]) == ()


def test_relocation_steps():
    steps = pc.relocation_steps([8, 4, 5, 9, 6, 2, 1, 7, 3])
    assert [b for b, _ in steps] == [2, 6, 7, 8, 9]
    assert [p.compact() for _, p in steps] == [
        "845961273", "845912673", "845912637", "458912637", "458126379"]


@given(small_perms)
def test_three_stack_sorts_agree(values):
    expected = pc.stack_sort(values)
    assert pc.stack_sort_dynamic(values) == expected
    assert pc.stack_sort_west(values) == expected


@pytest.mark.parametrize("values", [
    list(range(1500, 0, -1)),
    list(range(1, 1501)),
    list(range(750, 0, -1)) + list(range(751, 1501)),
])
def test_stack_sort_long_inputs(values):
    expected = pc.stack_sort_west(values)
    assert pc.stack_sort(values) == expected
    assert pc.stack_sort(values) == tuple(range(1, 1501))
    assert pc.sort_depth(values) <= 1


@pytest.mark.parametrize("values, depth", [
    ([], 0),
    ([1, 2, 3], 0),
    ([2, 1], 1),
    ([3, 2, 1], 1),
    ([2, 3, 1], 2),
    ([8, 4, 5, 9, 6, 2, 1, 7, 3], 4),
])
def test_sort_depth(values, depth):
    assert pc.sort_depth(values) == depth
    assert len(pc.sort_iterates(values)) == depth + 1
    assert pc.is_t_stack_sortable(values, depth)


def test_tail():
    assert pc.tail([6, 5, 1, 2, 9, 3, 4, 7, 8]) == (3, 4, 7, 8)
    assert pc.tail_start([6, 5, 1, 2, 9, 3, 4, 7, 8]) == 6
    assert pc.tail([]) == ()


def test_example_321_statistics():
    assert pc.fix(EXAMPLE_321) == 1
    assert pc.drop(EXAMPLE_321) == 6
    assert pc.pone(EXAMPLE_321) == 3
    assert pc.prmi(EXAMPLE_321) == 3
    assert pc.inv(EXAMPLE_321) == 11
    assert pc.mlw(EXAMPLE_321) == 4
    assert pc.lw_values(EXAMPLE_321) == {3: 2, 6: 4, 7: 2, 8: 1, 9: 0, 11: 1, 12: 1}
    assert sum(pc.lw_values(EXAMPLE_321).values()) == pc.inv(EXAMPLE_321)


def test_example_213_statistics():
    assert pc.bad(EXAMPLE_213) == 1
    assert pc.des(EXAMPLE_213) == 6
    assert pc.rrmi(EXAMPLE_213) == 3
    assert pc.rmi(EXAMPLE_213) == 3
    assert pc.rcinv(EXAMPLE_213) == 11


@pytest.mark.parametrize("n", [1, 2, 5])
def test_identity_statistics(n):
    ident = Permutation.identity(n)
    assert pc.bad(ident) == n
    assert pc.prmi(ident) == n
    assert pc.rmi(ident) == n
    assert pc.fix(ident) == n


def test_stat_records():
    summary = pc.stats_summary(EXAMPLE_321)
    assert set(summary) == {"des", "fix", "drop", "exc", "inv", "bad", "pone", "rmi", "rma",
                            "prmi", "rrmi", "rcinv", "mlw", "sort_depth"}
    assert summary["mlw"] == summary["sort_depth"] == 4
    classic = pc.classic_stats([2, 3, 1])
    assert classic.dt_set == [3]
    assert classic.rmi_set == [1]
    refined = pc.refined_stats(EXAMPLE_321)
    assert refined.mlw == 4


def test_canonical_decomposition():
    parts = pc.canonical_decomposition(EXAMPLE_321)
    assert [a for _, a in parts] == [1, 2, 5, 7, 9, 10, 11]
    assert [block for block, _ in parts if block] == [(3, 4), (6, 8), (12,)]
    with pytest.raises(PatternWitnessError):
        pc.canonical_decomposition([3, 2, 1])


@given(small_perms)
def test_321_avoidance_by_weak_excedance_split(values):
    assert pc.is_321_avoiding_by_split(values) == pc.avoids(values, (3, 2, 1))


@given(small_perms)
def test_symmetries_are_involutions(values):
    p = Permutation(values)
    assert p.inverse().inverse() == p
    assert pc.reverse(pc.reverse(p)) == p
    assert pc.complement(pc.complement(p)) == p
