"""
Catalan carriers: binary trees (labeled or bare shapes), plane trees and
Dyck paths, the maps between them and the path statistics on binary trees.

Trees are immutable; ``None`` is the empty binary tree.
"""

import re
from dataclasses import dataclass, field
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

from stacksort_bijection.core.errors import TreeError
from stacksort_bijection.core.perm_core import (
    PermLike,
    Permutation,
    require_avoids,
)
from stacksort_bijection.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class BinaryTree:
    """
    Binary tree node. ``label`` is None for bare shapes.

    Equality is structural (labels included).
    """

    label: Optional[int] = None
    left: Optional["BinaryTree"] = None
    right: Optional["BinaryTree"] = None
    size: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        size = 1
        if self.left is not None:
            size += self.left.size
        if self.right is not None:
            size += self.right.size
        object.__setattr__(self, "size", size)

    def __str__(self) -> str:
        return serialize_tree(self)

    def nodes(self) -> Iterator["BinaryTree"]:
        """Pre-order (node, left, right)."""
        yield self
        if self.left is not None:
            yield from self.left.nodes()
        if self.right is not None:
            yield from self.right.nodes()

    def labels(self) -> List[Optional[int]]:
        return [node.label for node in self.nodes()]


Tree = Optional[BinaryTree]


def node_count(tree: Tree) -> int:
    return 0 if tree is None else tree.size


@dataclass(frozen=True)
class PlaneTree:
    """Rooted tree with ordered children."""

    children: Tuple["PlaneTree", ...] = ()

    @property
    def edge_count(self) -> int:
        return sum(1 + child.edge_count for child in self.children)

    @property
    def node_count(self) -> int:
        return self.edge_count + 1

    @property
    def depth(self) -> int:
        """Number of edges on a longest root-to-leaf path."""
        return max((1 + child.depth for child in self.children), default=0)

    def __str__(self) -> str:
        return "(" + "".join(str(child) for child in self.children) + ")"


@dataclass(frozen=True)
class DyckPath:
    """
    Lattice path over {E, N} that never goes above the diagonal: every
    prefix has at least as many E steps as N steps.
    """

    steps: str = ""
    width: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        height = 0
        width = 0
        for step in self.steps:
            if step == "E":
                height += 1
                width = max(width, height)
            elif step == "N":
                height -= 1
                if height < 0:
                    raise TreeError(f"path {self.steps!r} goes above the diagonal")
            else:
                raise TreeError(f"invalid step {step!r} in path {self.steps!r}")
        if height != 0:
            raise TreeError(f"path {self.steps!r} does not end on the diagonal")
        object.__setattr__(self, "width", width)

    @property
    def n(self) -> int:
        return len(self.steps) // 2

    def __str__(self) -> str:
        return self.steps

    @property
    def n_step_columns(self) -> Tuple[int, ...]:
        """Number of E steps taken before each N step."""
        columns = []
        east = 0
        for step in self.steps:
            if step == "E":
                east += 1
            else:
                columns.append(east)
        return tuple(columns)

    @classmethod
    def from_columns(cls, columns: Sequence[int]) -> "DyckPath":
        parts = []
        east = 0
        for column in columns:
            if column < east:
                raise TreeError(f"columns {list(columns)} are not weakly increasing")
            parts.append("E" * (column - east) + "N")
            east = column
        if columns and east != len(columns):
            raise TreeError(f"columns {list(columns)} do not end at {len(columns)}")
        return cls("".join(parts))

    @property
    def returns(self) -> int:
        """Number of times the path comes back to the diagonal after leaving the origin."""
        height = 0
        count = 0
        for step in self.steps:
            height += 1 if step == "E" else -1
            if height == 0:
                count += 1
        return count

    @property
    def diagonal_corners(self) -> int:
        """E steps leaving the diagonal that are immediately followed by an N step."""
        height = 0
        count = 0
        for i, step in enumerate(self.steps):
            if step == "E" and height == 0 and self.steps[i + 1] == "N":
                count += 1
            height += 1 if step == "E" else -1
        return count

    def in_class(self, t: int) -> bool:
        """Membership in D_{n,t}: width at most t + 1."""
        return self.width <= t + 1


# ---------------------------------------------------------------- lambda

def lambda_map(word: PermLike) -> Tree:
    """
    Increasing binary tree of a word with distinct letters: the minimum
    becomes the root, the letters before it the left subtree and the
    letters after it the right subtree.
    """
    w = tuple(word)
    if len(set(w)) != len(w):
        raise TreeError(f"word {list(w)} has repeated letters")
    return _lambda(w)


def _lambda(w: Tuple[int, ...]) -> Tree:
    if not w:
        return None
    # Cartesian tree on positions, then nodes built from the largest letter down
    left: List[Optional[int]] = [None] * len(w)
    right: List[Optional[int]] = [None] * len(w)
    stack: List[int] = []
    for i, letter in enumerate(w):
        last = None
        while stack and w[stack[-1]] > letter:
            last = stack.pop()
        left[i] = last
        if stack:
            right[stack[-1]] = i
        stack.append(i)
    built: List[Tree] = [None] * len(w)
    for i in sorted(range(len(w)), key=w.__getitem__, reverse=True):
        built[i] = BinaryTree(
            w[i],
            None if left[i] is None else built[left[i]],
            None if right[i] is None else built[right[i]],
        )
    return built[stack[0]]


def in_order(tree: Tree) -> Tuple[int, ...]:
    out: List[int] = []
    pending: List[BinaryTree] = []
    node = tree
    while pending or node is not None:
        while node is not None:
            pending.append(node)
            node = node.left
        node = pending.pop()
        out.append(node.label)
        node = node.right
    return tuple(out)


def lambda_inv(tree: Tree) -> Permutation:
    return Permutation(in_order(tree))


def shape_of(tree: Tree) -> Tree:
    if tree is None:
        return None
    return BinaryTree(None, shape_of(tree.left), shape_of(tree.right))


def natural_labeling(shape: Tree) -> Tree:
    """Label by right pre-order: root, then right subtree, then left subtree."""
    counter = [0]

    def label(node: Tree) -> Tree:
        if node is None:
            return None
        counter[0] += 1
        mine = counter[0]
        right = label(node.right)
        left = label(node.left)
        return BinaryTree(mine, left, right)

    return label(shape)


def is_increasing(tree: Tree) -> bool:
    if tree is None:
        return True
    for child in (tree.left, tree.right):
        if child is not None and (child.label is None or tree.label is None
                                  or child.label <= tree.label):
            return False
    return is_increasing(tree.left) and is_increasing(tree.right)


def is_naturally_labeled(tree: Tree) -> bool:
    return tree == natural_labeling(shape_of(tree))


def tree_to_perm213(shape: Tree) -> Permutation:
    return Permutation(in_order(natural_labeling(shape)), check=False)


def perm213_to_tree(perm: PermLike) -> Tree:
    require_avoids(perm, (2, 1, 3))
    return shape_of(lambda_map(perm))


# ---------------------------------------------------------------- arms and paths

def right_arm(tree: Tree) -> List[BinaryTree]:
    arm = []
    node = tree
    while node is not None:
        arm.append(node)
        node = node.right
    return arm


def left_arm(tree: Tree) -> List[BinaryTree]:
    arm = []
    node = tree
    while node is not None:
        arm.append(node)
        node = node.left
    return arm


def _max_edges(tree: Tree, side: str) -> int:
    """Largest number of `side` edges on a downward path starting at the root of tree."""
    if tree is None:
        return 0
    left = _max_edges(tree.left, side)
    right = _max_edges(tree.right, side)
    best = 0
    if tree.left is not None:
        best = max(best, left + (side == "L"))
    if tree.right is not None:
        best = max(best, right + (side == "R"))
    return best


def llp(tree: Tree) -> int:
    """Maximum number of left edges on a descending path."""
    return _max_edges(tree, "L")


def lrp(tree: Tree) -> int:
    """Maximum number of right edges on a descending path."""
    return _max_edges(tree, "R")


def lrrp(tree: Tree) -> int:
    """
    One plus the maximum number of right edges on a descending path that
    avoids the right arm; 0 for a tree without left edges.
    """
    subtrees = [node.left for node in right_arm(tree) if node.left is not None]
    if not subtrees:
        return 0
    return 1 + max(_max_edges(sub, "R") for sub in subtrees)


class PathStats(NamedTuple):
    lrrp: int
    llp: int
    lrp: int
    arm_length: int


def path_stats(tree: Tree) -> PathStats:
    return PathStats(lrrp(tree), llp(tree), lrp(tree), len(right_arm(tree)))


# ---------------------------------------------------------------- rho

def rho(perm: PermLike) -> DyckPath:
    """
    Dyck path of a 321-avoider: the y-th N step is taken after
    M_y = max(M_{y-1}, position of y, y) E steps.
    """
    p = tuple(perm)
    require_avoids(p, (3, 2, 1))
    position = {v: i for i, v in enumerate(p, start=1)}
    columns = []
    m = 0
    for y in range(1, len(p) + 1):
        m = max(m, position[y], y)
        columns.append(m)
    return DyckPath.from_columns(columns)


def rho_inv(path: DyckPath) -> Permutation:
    """
    Put y at position M_y whenever M_y jumps past M_{y-1}, then fill the
    free positions with the unused values in increasing order.
    """
    columns = path.n_step_columns
    n = len(columns)
    values = [0] * n
    used = set()
    previous = 0
    for y, m in enumerate(columns, start=1):
        if m > previous:
            values[m - 1] = y
            used.add(y)
        previous = m
    rest = iter(v for v in range(1, n + 1) if v not in used)
    for i in range(n):
        if values[i] == 0:
            values[i] = next(rest)
    return Permutation(values)


# ---------------------------------------------------------------- tau

def tau(tree: PlaneTree) -> DyckPath:
    """Pre-order walk: E for each edge walked down, N for each edge walked up."""
    parts: List[str] = []

    def walk(node: PlaneTree):
        for child in node.children:
            parts.append("E")
            walk(child)
            parts.append("N")

    walk(tree)
    return DyckPath("".join(parts))


def tau_inv(path: DyckPath) -> PlaneTree:
    steps = path.steps if isinstance(path, DyckPath) else DyckPath(str(path)).steps
    stack: List[list] = [[]]
    for step in steps:
        if step == "E":
            stack.append([])
        else:
            if len(stack) < 2:
                raise TreeError(f"malformed path {steps!r}")
            children = stack.pop()
            stack[-1].append(PlaneTree(tuple(children)))
    if len(stack) != 1:
        raise TreeError(f"malformed path {steps!r}")
    return PlaneTree(tuple(stack[0]))


# ---------------------------------------------------------------- phi, beta, gamma

def _forest_to_binary(children: Sequence[PlaneTree]) -> Tree:
    if not children:
        return None
    first = children[0]
    return BinaryTree(None, _forest_to_binary(first.children),
                      _forest_to_binary(children[1:]))


def phi(tree: PlaneTree) -> Tree:
    """Leftmost child becomes the left child, next sibling becomes the right child."""
    return _forest_to_binary(tree.children)


def _binary_to_forest(node: Tree) -> Tuple[PlaneTree, ...]:
    forest = []
    while node is not None:
        forest.append(PlaneTree(_binary_to_forest(node.left)))
        node = node.right
    return tuple(forest)


def phi_inv(tree: Tree) -> PlaneTree:
    return PlaneTree(_binary_to_forest(tree))


def beta(tree: Tree) -> Tree:
    """Mirror image."""
    if tree is None:
        return None
    return BinaryTree(tree.label, beta(tree.right), beta(tree.left))


def gamma(tree: Tree) -> Tree:
    """Mirror every subtree hanging as a left child off the right arm."""
    if tree is None:
        return None
    return BinaryTree(tree.label, beta(tree.left), gamma(tree.right))


# ---------------------------------------------------------------- serialization

def serialize_tree(tree: Tree) -> str:
    """`(label left right)` with `-` for an absent child and `*` for an unlabeled node."""
    if tree is None:
        return "-"
    label = "*" if tree.label is None else str(tree.label)
    return f"({label} {serialize_tree(tree.left)} {serialize_tree(tree.right)})"


_TREE_TOKENS = re.compile(r"\(|\)|-|\*|\d+|\S")


def parse_tree(text: str) -> Tree:
    tokens = _TREE_TOKENS.findall(text)
    pos = 0

    def parse() -> Tree:
        nonlocal pos
        if pos >= len(tokens):
            raise TreeError(f"unexpected end of tree text {text!r}")
        token = tokens[pos]
        pos += 1
        if token == "-":
            return None
        if token != "(":
            raise TreeError(f"unexpected token {token!r} in {text!r}")
        label_token = tokens[pos] if pos < len(tokens) else ""
        pos += 1
        if label_token == "*":
            label = None
        elif label_token.isdigit():
            label = int(label_token)
        else:
            raise TreeError(f"bad node label {label_token!r} in {text!r}")
        left = parse()
        right = parse()
        if pos >= len(tokens) or tokens[pos] != ")":
            raise TreeError(f"missing ')' in {text!r}")
        pos += 1
        return BinaryTree(label, left, right)

    tree = parse()
    if pos != len(tokens):
        raise TreeError(f"trailing text in {text!r}")
    return tree


def parse_plane_tree(text: str) -> PlaneTree:
    stack: List[list] = []
    root: Optional[PlaneTree] = None
    for ch in text.strip():
        if ch == "(":
            if root is not None:
                raise TreeError(f"trailing text in {text!r}")
            stack.append([])
        elif ch == ")":
            if not stack:
                raise TreeError(f"unbalanced ')' in {text!r}")
            node = PlaneTree(tuple(stack.pop()))
            if stack:
                stack[-1].append(node)
            else:
                root = node
        elif not ch.isspace():
            raise TreeError(f"unexpected character {ch!r} in {text!r}")
    if root is None or stack:
        raise TreeError(f"unbalanced plane tree {text!r}")
    return root


def to_dot(tree: Tree, name: str = "T") -> str:
    """Graphviz DOT, children listed left before right, edges tagged side=L|R."""
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    counter = [0]

    def visit(node: BinaryTree) -> str:
        counter[0] += 1
        node_id = f"n{counter[0]}"
        label = "" if node.label is None else str(node.label)
        lines.append(f'  {node_id} [label="{label}"];')
        for child, side in ((node.left, "L"), (node.right, "R")):
            if child is not None:
                child_id = visit(child)
                lines.append(f'  {node_id} -> {child_id} [side={side}, label="{side}"];')
        return node_id

    if tree is not None:
        visit(tree)
    lines.append("}")
    return "\n".join(lines)


def render_path(path: DyckPath, perm: Optional[PermLike] = None) -> str:
    """
    ASCII drawing of a Dyck path, top row first. Row y shows the cells
    1..n, with `X` on the cross (position of y, y) when the permutation is
    given, and `|` where the y-th N step runs.
    """
    columns = path.n_step_columns
    n = len(columns)
    position = {}
    if perm is not None:
        position = {v: i for i, v in enumerate(tuple(perm), start=1)}
    rows = []
    for y in range(n, 0, -1):
        cells = []
        for x in range(1, n + 1):
            cells.append("X" if position.get(y) == x else ".")
            if x == columns[y - 1]:
                cells.append("|")
        rows.append(f"{y:>3} " + "".join(cells))
    rows.append("    " + path.steps)
    return "\n".join(rows)
