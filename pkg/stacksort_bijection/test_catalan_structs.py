"""
Tests for the Catalan carriers and the maps between them.
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stacksort_bijection.core import catalan_structs as cs
from stacksort_bijection.core.catalan_structs import BinaryTree, DyckPath, PlaneTree
from stacksort_bijection.core.enumerate_verify import avoiders, binary_shapes, plane_trees
from stacksort_bijection.core.errors import PatternWitnessError, TreeError
from stacksort_bijection.core.perm_core import Permutation, fix, mlw, prmi

EXAMPLE_321 = Permutation([3, 4, 1, 6, 8, 2, 5, 7, 9, 12, 10, 11])
EXAMPLE_PATH = "EEENEEENNNENNENNENEENENN"
EXAMPLE_PLANE = "(((()((()))())())()(()()))"
LAMBDA_EXAMPLE = Permutation([14, 7, 13, 9, 11, 12, 10, 8, 1, 5, 6, 2, 3, 4])

perms_321 = st.integers(min_value=1, max_value=7).flatmap(
    lambda n: st.sampled_from(avoiders(n, [(3, 2, 1)])))


def test_lambda_map_and_in_order():
    tree = cs.lambda_map([2, 3, 1])
    assert tree == BinaryTree(1, BinaryTree(2, None, BinaryTree(3)), None)
    assert cs.in_order(tree) == (2, 3, 1)
    assert cs.lambda_inv(tree) == (2, 3, 1)
    assert cs.lambda_map([]) is None
    with pytest.raises(TreeError):
        cs.lambda_map([1, 1])


@pytest.mark.parametrize("values", [list(range(1500, 0, -1)), list(range(1, 1501))])
def test_lambda_map_long_paths(values):
    tree = cs.lambda_map(values)
    assert cs.in_order(tree) == tuple(values)
    assert len(cs.left_arm(tree)) + len(cs.right_arm(tree)) == 1501


def test_lambda_example_tree():
    tree = cs.lambda_map(LAMBDA_EXAMPLE)
    assert cs.is_increasing(tree)
    assert cs.is_naturally_labeled(tree)
    assert [node.label for node in cs.right_arm(tree)] == [1, 2, 3, 4]
    assert cs.lrrp(tree) == 4


def test_path_statistics():
    # 1 -L-> 2 -R-> 3 -L-> 4
    tree = BinaryTree(1, BinaryTree(2, None, BinaryTree(3, BinaryTree(4), None)), None)
    assert cs.llp(tree) == 2
    assert cs.lrp(tree) == 1
    assert cs.lrrp(tree) == 2
    assert cs.path_stats(tree) == cs.PathStats(lrrp=2, llp=2, lrp=1, arm_length=1)
    assert cs.lrrp(BinaryTree(1, None, BinaryTree(2))) == 0
    assert [node.label for node in cs.left_arm(tree)] == [1, 2]


def test_natural_labeling():
    shape = cs.shape_of(cs.lambda_map([2, 3, 1]))
    labeled = cs.natural_labeling(shape)
    assert labeled.labels() == [1, 2, 3]
    assert cs.tree_to_perm213(shape) == (2, 3, 1)
    assert cs.perm213_to_tree([2, 3, 1]) == shape
    with pytest.raises(PatternWitnessError):
        cs.perm213_to_tree([2, 1, 3])


def test_shape_natural_labeling_is_a_bijection_onto_213_avoiders():
    images = {cs.tree_to_perm213(shape) for shape in binary_shapes(6)}
    assert images == set(avoiders(6, [(2, 1, 3)]))


def test_dyck_path_validation():
    with pytest.raises(TreeError, match="above the diagonal"):
        DyckPath("NE")
    with pytest.raises(TreeError, match="end on the diagonal"):
        DyckPath("EEN")
    with pytest.raises(TreeError, match="invalid step"):
        DyckPath("EX")
    path = DyckPath("EENNEN")
    assert path.n == 3
    assert path.width == 2
    assert path.returns == 2
    assert path.diagonal_corners == 1
    assert path.in_class(1)
    assert not path.in_class(0)
    assert DyckPath.from_columns((2, 2, 3)) == path


def test_rho_example():
    path = cs.rho(EXAMPLE_321)
    assert path.n_step_columns == (3, 6, 6, 6, 7, 7, 8, 8, 9, 11, 12, 12)
    assert str(path) == EXAMPLE_PATH
    assert path.width == mlw(EXAMPLE_321) + 1 == 5
    assert path.returns == prmi(EXAMPLE_321) == 3
    assert path.diagonal_corners == fix(EXAMPLE_321) == 1
    assert cs.rho_inv(path) == EXAMPLE_321


@pytest.mark.parametrize("values, steps", [
    ([2, 1, 3], "EENNEN"),
    ([1, 3, 2], "ENEENN"),
    ([2, 3, 1], "EEENNN"),
    ([3, 1, 2], "EENENN"),
    ([1, 2, 3], "ENENEN"),
])
def test_rho_small(values, steps):
    assert str(cs.rho(values)) == steps
    assert cs.rho_inv(DyckPath(steps)) == tuple(values)


def test_rho_rejects_321():
    with pytest.raises(PatternWitnessError):
        cs.rho([3, 2, 1])


@given(perms_321)
def test_rho_roundtrip(perm):
    path = cs.rho(perm)
    assert cs.rho_inv(path) == perm
    assert path.width == mlw(perm) + 1


def test_tau_example():
    plane = cs.tau_inv(DyckPath(EXAMPLE_PATH))
    assert str(plane) == EXAMPLE_PLANE
    assert plane.depth == 5
    assert plane.edge_count == 12
    assert len(plane.children) == 3
    assert cs.tau(plane) == DyckPath(EXAMPLE_PATH)
    assert cs.parse_plane_tree(EXAMPLE_PLANE) == plane


def test_phi_and_gamma_example():
    shape = cs.phi(cs.tau_inv(DyckPath(EXAMPLE_PATH)))
    assert cs.node_count(shape) == 12
    assert len(cs.right_arm(shape)) == 3
    assert cs.llp(shape) == 4
    mirrored = cs.gamma(shape)
    assert cs.lrrp(mirrored) == 4
    assert cs.tree_to_perm213(mirrored) == (12, 6, 11, 8, 9, 10, 7, 1, 2, 5, 4, 3)


def test_plane_and_binary_roundtrips_size_6():
    for plane in plane_trees(6):
        shape = cs.phi(plane)
        assert cs.phi_inv(shape) == plane
        assert cs.tau_inv(cs.tau(plane)) == plane
        assert cs.llp(shape) == plane.depth - 1
    for shape in binary_shapes(6):
        assert cs.gamma(cs.gamma(shape)) == shape
        assert cs.beta(cs.beta(shape)) == shape
        assert cs.lrrp(cs.gamma(shape)) == cs.llp(shape)


def test_serialization_roundtrip():
    tree = cs.lambda_map([3, 1, 4, 2])
    text = cs.serialize_tree(tree)
    assert text == "(1 (3 - -) (2 (4 - -) -))"
    assert cs.parse_tree(text) == tree
    assert cs.serialize_tree(None) == "-"
    assert cs.serialize_tree(cs.shape_of(tree)) == "(* (* - -) (* (* - -) -))"
    assert cs.parse_tree("(* - -)") == BinaryTree(None)


@pytest.mark.parametrize("text", ["(1 - -", "(x - -)", "(1 - -) -", ""])
def test_parse_tree_errors(text):
    with pytest.raises(TreeError):
        cs.parse_tree(text)


@pytest.mark.parametrize("text", ["(()", "())", "(a)", ""])
def test_parse_plane_tree_errors(text):
    with pytest.raises(TreeError):
        cs.parse_plane_tree(text)


def test_plane_tree_measures():
    tree = PlaneTree((PlaneTree((PlaneTree(),)), PlaneTree()))
    assert str(tree) == "((())())"
    assert tree.edge_count == 3
    assert tree.node_count == 4
    assert tree.depth == 2


def test_to_dot():
    dot = cs.to_dot(cs.lambda_map([2, 1, 3]))
    assert dot.startswith("digraph T {")
    assert "side=L" in dot and "side=R" in dot
    assert dot.index("side=L") < dot.index("side=R")
    assert dot.rstrip().endswith("}")


def test_render_path():
    drawing = cs.render_path(cs.rho([2, 1, 3]), [2, 1, 3])
    lines = drawing.splitlines()
    assert len(lines) == 4
    assert lines[-1].strip() == "EENNEN"
    assert "X" in lines[0]
