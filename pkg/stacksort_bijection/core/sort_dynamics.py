"""
Stack sorting seen on increasing binary trees.

Two tree-level models of S live here:

* Phi, which moves every right leaf onto the right arm; it realizes S on
  tailed 213-avoiding permutations.
* Theta, which relocates the right leaves of a 321-avoiding tree one at a
  time in increasing order; it realizes S on 321-avoiding permutations.

Public operations take and return immutable BinaryTree values. Edits run
on a private label-indexed copy.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from stacksort_bijection.core.catalan_structs import (
    BinaryTree,
    Tree,
    in_order,
    is_increasing,
    is_naturally_labeled,
    lambda_map,
    lrrp,
    right_arm,
)
from stacksort_bijection.core.errors import TreeError
from stacksort_bijection.core.perm_core import (
    PermLike,
    avoids,
    right_to_left_maxima,
    standardize,
    tail_start,
)
from stacksort_bijection.utils.logger import get_logger

logger = get_logger(__name__)


class _MutableTree:
    def __init__(self, tree: Tree):
        self.root: Optional[int] = None if tree is None else tree.label
        self.left: Dict[int, Optional[int]] = {}
        self.right: Dict[int, Optional[int]] = {}
        self.parent: Dict[int, Optional[int]] = {}
        if tree is not None:
            self._load(tree, None)

    def _load(self, node: BinaryTree, parent: Optional[int]):
        label = node.label
        if label is None or label in self.parent:
            raise TreeError("tree labels must be present and distinct")
        self.parent[label] = parent
        self.left[label] = None if node.left is None else node.left.label
        self.right[label] = None if node.right is None else node.right.label
        if node.left is not None:
            self._load(node.left, label)
        if node.right is not None:
            self._load(node.right, label)

    def freeze(self) -> Tree:
        def build(label: Optional[int]) -> Tree:
            if label is None:
                return None
            return BinaryTree(label, build(self.left[label]), build(self.right[label]))
        return build(self.root)

    def arm(self) -> List[int]:
        out = []
        node = self.root
        while node is not None:
            out.append(node)
            node = self.right[node]
        return out

    def replace_child(self, parent: Optional[int], old: int, new: Optional[int]):
        if parent is None:
            self.root = new
        elif self.left[parent] == old:
            self.left[parent] = new
        else:
            self.right[parent] = new
        if new is not None:
            self.parent[new] = parent

    def detach_leaf_end(self, v: int):
        """Remove v, which has no right child, putting its left subtree in its place."""
        self.replace_child(self.parent[v], v, self.left[v])
        self.left[v] = None
        self.parent[v] = None

    def insert_above(self, v: int, target: int):
        """Make v the parent of target, taking target's slot; target becomes v's right child."""
        self.replace_child(self.parent[target], target, v)
        self.right[v] = target
        self.parent[target] = v

    def append_to_arm(self, v: int):
        last = self.arm()[-1]
        self.right[last] = v
        self.parent[v] = last
        self.right[v] = None

    def in_order(self, label: Optional[int]) -> List[int]:
        out: List[int] = []
        stack: List[int] = []
        node = label
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = self.left[node]
            node = stack.pop()
            out.append(node)
            node = self.right[node]
        return out

    def right_leaves(self) -> List[int]:
        arm = set(self.arm())
        return sorted(v for v in self.parent if v not in arm and self.right[v] is None)


def _require_increasing(tree: Tree):
    if not is_increasing(tree):
        raise TreeError("tree is not increasingly labeled")


# ---------------------------------------------------------------- right leaves and Phi

def right_leaves(tree: Tree) -> List[int]:
    """Nodes off the right arm with no right child, in increasing order."""
    arm = {node.label for node in right_arm(tree)}
    if tree is None:
        return []
    return sorted(node.label for node in tree.nodes()
                  if node.right is None and node.label not in arm)


def _phi_v(mt: _MutableTree, v: int):
    mt.detach_leaf_end(v)
    for a in mt.arm():
        if a > v:
            mt.insert_above(v, a)
            return
    mt.append_to_arm(v)


def phi_v(tree: Tree, v: int) -> Tree:
    """
    Move the right leaf v onto the right arm at its label-increasing place;
    v's left subtree takes over v's old slot.
    """
    _require_increasing(tree)
    if v not in right_leaves(tree):
        raise TreeError(f"{v} is not a right leaf")
    mt = _MutableTree(tree)
    _phi_v(mt, v)
    return mt.freeze()


def Phi(tree: Tree) -> Tree:
    """Apply phi_v for every right leaf of the tree."""
    _require_increasing(tree)
    mt = _MutableTree(tree)
    for v in right_leaves(tree):
        _phi_v(mt, v)
    return mt.freeze()


# ---------------------------------------------------------------- tails

def tree_tail(tree: Tree) -> Tuple[int, ...]:
    """
    Right-arm path from the largest arm node back to the first node that
    has a left child (the whole arm when there is none), smallest first.
    """
    arm = right_arm(tree)
    start = 0
    for i in range(len(arm) - 1, -1, -1):
        if arm[i].left is not None:
            start = i
            break
    return tuple(node.label for node in arm[start:])


def _truncate_arm(tree: Tree, keep: int) -> Tree:
    if tree is None:
        return None
    if tree.label == keep:
        return BinaryTree(tree.label, tree.left, None)
    return BinaryTree(tree.label, tree.left, _truncate_arm(tree.right, keep))


def is_tailed_tree(tree: Tree) -> bool:
    """
    Removing the tail except its smallest node and relabeling by rank
    leaves a naturally labeled tree.
    """
    if tree is None:
        return True
    tail = tree_tail(tree)
    trimmed = _truncate_arm(tree, tail[0])
    return is_naturally_labeled(lambda_map(standardize(in_order(trimmed))))


def is_tailed_213(perm: PermLike) -> bool:
    """The word minus its tail, keeping the tail's smallest letter, avoids 213."""
    w = tuple(perm)
    if not w:
        return True
    return avoids(w[:tail_start(w)], (2, 1, 3))


@dataclass(frozen=True)
class TailedTreeView:
    tree: Tree
    tail: Tuple[int, ...]
    right_leaves: Tuple[int, ...]

    @classmethod
    def of(cls, tree: Tree) -> "TailedTreeView":
        _require_increasing(tree)
        if not is_tailed_tree(tree):
            raise TreeError("tree is not a tailed binary tree")
        return cls(tree, tree_tail(tree), tuple(right_leaves(tree)))


def pre_tail_maxima(perm: PermLike) -> List[int]:
    """Right-to-left maxima of the word with its tail removed, increasing."""
    w = tuple(perm)
    sigma = w[:tail_start(w) - 1] if w else ()
    return sorted(v for _, v in right_to_left_maxima(sigma))


# ---------------------------------------------------------------- 321-avoiding trees

def right_chains(tree: Tree) -> Dict[int, Tuple[int, ...]]:
    """C_v for every node v with a left child: the all-right path starting at v's left child."""
    chains: Dict[int, Tuple[int, ...]] = {}
    if tree is None:
        return chains
    for node in tree.nodes():
        if node.left is not None:
            chain = []
            cur = node.left
            while cur is not None:
                chain.append(cur.label)
                cur = cur.right
            chains[node.label] = tuple(chain)
    return chains


def is_321_tree(tree: Tree) -> bool:
    """
    Every root-to-right-leaf path has exactly one left edge, and the right
    chains are value-ordered the same way as their attachment nodes.
    """
    _require_increasing(tree)
    if tree is None:
        return True
    arm = {node.label for node in right_arm(tree)}
    for node in tree.nodes():
        if node.label not in arm and node.left is not None:
            return False
    chains = sorted(right_chains(tree).items())
    for (_, first), (_, second) in zip(chains, chains[1:]):
        if max(first) >= min(second):
            return False
    return True


def _arm_ancestor(mt: _MutableTree, v: int) -> int:
    arm = set(mt.arm())
    node = mt.parent[v]
    while node not in arm:
        node = mt.parent[node]
    return node


def _rft(mt: _MutableTree, v: int) -> Optional[int]:
    p = _arm_ancestor(mt, v)
    for label in mt.in_order(mt.right[p]):
        if label > v:
            return label
    return None


def _placement(mt: _MutableTree, v: int) -> Tuple[str, Optional[int]]:
    """The rule theta_v applies and the node v goes above (None for 'c')."""
    target = _rft(mt, v)
    if target is None:
        return "c", None
    if target in set(mt.arm()):
        return "a", target
    owner = mt.parent[target]
    # v below owner would break the increasing labeling; it joins the arm instead
    if v < owner:
        return "a", owner
    return "b", target


def _theta(mt: _MutableTree, v: int) -> str:
    case, target = _placement(mt, v)
    mt.detach_leaf_end(v)
    if target is None:
        mt.append_to_arm(v)
    else:
        mt.insert_above(v, target)
    return case


def _require_321_leaf(tree: Tree, v: int):
    if not is_321_tree(tree):
        raise TreeError("tree is not a 321-avoiding tree")
    if v not in right_leaves(tree):
        raise TreeError(f"{v} is not a right leaf")


def rft(tree: Tree, v: int) -> Optional[int]:
    """
    First node, in in-order, of the right subtree of the arm node carrying
    v's chain that is larger than v.
    """
    _require_321_leaf(tree, v)
    return _rft(_MutableTree(tree), v)


def theta_case(tree: Tree, v: int) -> str:
    """Which relocation rule ('a', 'b' or 'c') theta_v applies."""
    _require_321_leaf(tree, v)
    return _placement(_MutableTree(tree), v)[0]


def theta_v(tree: Tree, v: int) -> Tree:
    """
    Relocate the right leaf v so that it sits just before rft(v) in in-order.
    When rft(v) heads the chain of an arm node w larger than v, v goes on the
    arm as w's parent; otherwise v goes directly above rft(v). With no rft(v),
    v goes at the end of the right arm.
    """
    _require_321_leaf(tree, v)
    mt = _MutableTree(tree)
    _theta(mt, v)
    return mt.freeze()


def theta_steps(tree: Tree) -> List[Tuple[int, str, Tree]]:
    """(v, case, tree after theta_v) for the right leaves in increasing order."""
    if not is_321_tree(tree):
        raise TreeError("tree is not a 321-avoiding tree")
    mt = _MutableTree(tree)
    steps = []
    for v in right_leaves(tree):
        case = _theta(mt, v)
        steps.append((v, case, mt.freeze()))
    return steps


def Theta(tree: Tree) -> Tree:
    if not is_321_tree(tree):
        raise TreeError("tree is not a 321-avoiding tree")
    mt = _MutableTree(tree)
    for v in right_leaves(tree):
        _theta(mt, v)
    return mt.freeze()


def _right_subtree_labels(tree: Tree, v: int) -> set:
    for node in tree.nodes():
        if node.label == v:
            return set() if node.right is None else {n.label for n in node.right.nodes()}
    raise TreeError(f"{v} is not in the tree")


def g_v(tree: Tree, v: int) -> int:
    """|{b > v : b not in the right subtree of v}| for a right-arm node v."""
    if v not in {node.label for node in right_arm(tree)}:
        raise TreeError(f"{v} is not on the right arm")
    inside = _right_subtree_labels(tree, v)
    return sum(1 for b in (node.label for node in tree.nodes()) if b > v and b not in inside)


def g(tree: Tree) -> int:
    return max((g_v(tree, node.label) for node in right_arm(tree)), default=0)


@dataclass(frozen=True)
class AvoidingTreeView:
    tree: Tree
    right_arm: Tuple[int, ...]
    right_chains: Dict[int, Tuple[int, ...]]
    g_values: Dict[int, int]

    @classmethod
    def of(cls, tree: Tree) -> "AvoidingTreeView":
        if not is_321_tree(tree):
            raise TreeError("tree is not a 321-avoiding tree")
        arm = tuple(node.label for node in right_arm(tree))
        return cls(tree, arm, right_chains(tree), {v: g_v(tree, v) for v in arm})

    def __hash__(self):
        return hash((self.tree, self.right_arm))


def lrrp_decrements(tree: Tree) -> bool:
    """lrrp(Phi(T)) = lrrp(T) - 1 (vacuously true when lrrp(T) = 0)."""
    before = lrrp(tree)
    return before == 0 or lrrp(Phi(tree)) == before - 1
