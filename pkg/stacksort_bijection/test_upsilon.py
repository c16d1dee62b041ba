"""
Tests for the bijection Upsilon and the tree map used for the 132 class.
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stacksort_bijection.core import catalan_structs as cs
from stacksort_bijection.core import perm_core as pc
from stacksort_bijection.core import upsilon as up
from stacksort_bijection.core.catalan_structs import BinaryTree
from stacksort_bijection.core.enumerate_verify import avoiders, verify_suite
from stacksort_bijection.core.errors import PatternWitnessError
from stacksort_bijection.core.perm_core import Permutation, parse_permutation

EXAMPLE_321 = Permutation([3, 4, 1, 6, 8, 2, 5, 7, 9, 12, 10, 11])
EXAMPLE_213 = Permutation([12, 6, 11, 8, 9, 10, 7, 1, 2, 5, 4, 3])

perms_321 = st.integers(min_value=1, max_value=8).flatmap(
    lambda n: st.sampled_from(avoiders(n, [(3, 2, 1)])))


class BrokenGammaPipeline(up.UpsilonPipeline):
    """Leaves the left subtree of the root unmirrored."""

    name = "broken-gamma"

    def gamma(self, shape):
        if shape is None:
            return None
        return BinaryTree(shape.label, shape.left, cs.gamma(shape.right))


def test_upsilon_example():
    assert up.upsilon(EXAMPLE_321) == EXAMPLE_213
    assert up.upsilon_inv(EXAMPLE_213) == EXAMPLE_321


def test_upsilon_trace_stages():
    trace = up.upsilon_trace(EXAMPLE_321)
    assert trace.stage("rho") == "EEENEEENNNENNENNENEENENN"
    assert trace.stage("tau") == "(((()((()))())())()(()()))"
    assert trace.stage("lambda") == str(EXAMPLE_213)
    assert trace.stage("gamma") == cs.serialize_tree(cs.gamma(trace.shape))
    assert trace.widths() == (5, 5, 5, 5)
    assert trace.result == EXAMPLE_213
    with pytest.raises(ValueError, match="unknown step"):
        trace.stage("delta")


def test_trace_dict_keeps_direction():
    forward = up.upsilon_trace(EXAMPLE_321).to_dict()
    backward = up.upsilon_inverse_trace(EXAMPLE_213).to_dict()
    assert forward["input"] == backward["output"] == str(EXAMPLE_321)
    assert forward["output"] == backward["input"] == str(EXAMPLE_213)
    assert forward["dyck"] == backward["dyck"]
    assert list(forward) == ["input", "dyck", "plane", "shape", "gamma_shape", "output"]


def test_transported_statistics_on_example():
    assert (pc.fix(EXAMPLE_321), pc.drop(EXAMPLE_321)) == (1, 6)
    assert (pc.bad(EXAMPLE_213), pc.des(EXAMPLE_213)) == (1, 6)
    assert (pc.pone(EXAMPLE_321), pc.prmi(EXAMPLE_321), pc.inv(EXAMPLE_321)) == (3, 3, 11)
    assert (pc.rrmi(EXAMPLE_213), pc.rmi(EXAMPLE_213), pc.rcinv(EXAMPLE_213)) == (3, 3, 11)


@pytest.mark.parametrize("n", [1, 4, 9])
def test_identity_is_fixed(n):
    ident = Permutation.identity(n)
    assert up.upsilon(ident) == ident


def test_upsilon_requires_321_avoider():
    with pytest.raises(PatternWitnessError):
        up.upsilon([3, 2, 1])
    with pytest.raises(PatternWitnessError):
        up.upsilon_inv([2, 1, 3])


@given(perms_321)
def test_upsilon_preserves_depth_and_inverts(perm):
    image = up.upsilon(perm)
    assert pc.avoids(image, (2, 1, 3))
    assert pc.sort_depth(image) == pc.sort_depth(perm)
    assert up.upsilon_inv(image) == perm
    assert (pc.fix(perm), pc.drop(perm)) == (pc.bad(image), pc.des(image))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7])
def test_upsilon_is_a_bijection(n):
    images = {up.upsilon(p) for p in avoiders(n, [(3, 2, 1)])}
    assert images == set(avoiders(n, [(2, 1, 3)]))


def test_conj2_bijection():
    assert up.conj2_bijection(Permutation.identity(4)) == (4, 3, 2, 1)
    assert up.conj2_bijection_inv((4, 3, 2, 1)) == (1, 2, 3, 4)
    with pytest.raises(PatternWitnessError):
        up.conj2_bijection([2, 1, 3])


@pytest.mark.parametrize("n, t", [(5, 1), (6, 2), (7, 3)])
def test_conj2_bijection_moves_between_pattern_classes(n, t):
    source = avoiders(n, [(2, 1, 3), pc.long_cycle_pattern(t).values])
    target = set(avoiders(n, [(2, 1, 3), pc.increasing_pattern(t + 2).values]))
    assert {up.conj2_bijection(p) for p in source} == target
    assert len(source) == len(target)


def test_reverse_complement():
    assert up.reverse_complement([1, 3, 2]) == (2, 1, 3)


def test_from_132_class():
    perm = parse_permutation("3 4 2 1")
    sigma, pi = up.from_132_class(perm)
    assert pc.avoids(sigma, (2, 1, 3))
    assert pc.avoids(pi, (3, 2, 1))
    assert up.upsilon(pi) == sigma
    assert pc.sort_depth(pi) == pc.sort_depth(sigma) <= 1


def test_broken_gamma_is_caught():
    broken = BrokenGammaPipeline()
    assert broken.map([2, 3, 1]) == (3, 2, 1)
    report = verify_suite(n_max=5, pipeline=broken, only=["upsilon_sort_depth"])
    assert not report.passed
    result = report.check("upsilon_sort_depth")
    assert result.counterexample is not None
    assert len(parse_permutation(result.counterexample["perm"])) <= 6

    report = verify_suite(n_max=5, pipeline=broken, only=["transport_fix_drop"])
    assert not report.passed
    result = report.check("transport_fix_drop")
    perm = parse_permutation(result.counterexample["perm"])
    assert len(perm) <= 3
    assert parse_permutation(result.counterexample["image"]) == broken.map(perm)
    assert result.counterexample["fix_drop"] != result.counterexample["bad_des"]
