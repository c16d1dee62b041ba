"""
The bijection Upsilon from 321-avoiding to 213-avoiding permutations that
keeps the number of stack-sorting passes, built as

    321-avoider --rho--> Dyck path --tau^-1--> plane tree --phi--> shape
                --gamma--> shape --natural labeling, in-order--> 213-avoider

and the tree map used for the (132, 12...(t+2)) correspondence.
"""

from dataclasses import dataclass
from typing import Dict, Tuple

from stacksort_bijection.core import catalan_structs as cs
from stacksort_bijection.core.catalan_structs import DyckPath, PlaneTree, Tree
from stacksort_bijection.core.perm_core import (
    PermLike,
    Permutation,
    as_perm,
    complement,
    require_avoids,
    reverse,
)
from stacksort_bijection.utils.logger import get_logger

logger = get_logger(__name__)

STEPS = ("rho", "tau", "phi", "gamma", "lambda")


@dataclass(frozen=True)
class UpsilonTrace:
    """
    Every intermediate object of one run of Upsilon. ``input`` is always
    the 321-avoider and ``output`` the 213-avoider, whichever direction
    the trace was computed in.
    """

    input: Permutation
    dyck: DyckPath
    plane: PlaneTree
    shape: Tree
    gamma_shape: Tree
    output: Permutation
    inverse: bool = False

    _STAGE_FIELDS = {
        "rho": "dyck",
        "tau": "plane",
        "phi": "shape",
        "gamma": "gamma_shape",
        "lambda": "output",
    }

    def stage(self, step: str) -> str:
        """Serialized object produced by the named forward step."""
        if step not in self._STAGE_FIELDS:
            raise ValueError(f"unknown step {step!r}; expected one of {', '.join(STEPS)}")
        value = getattr(self, self._STAGE_FIELDS[step])
        if step in ("phi", "gamma"):
            return cs.serialize_tree(value)
        return str(value)

    def to_dict(self) -> Dict[str, str]:
        body = {
            "dyck": str(self.dyck),
            "plane": str(self.plane),
            "shape": cs.serialize_tree(self.shape),
            "gamma_shape": cs.serialize_tree(self.gamma_shape),
        }
        if self.inverse:
            return {"input": str(self.output), **body, "output": str(self.input)}
        return {"input": str(self.input), **body, "output": str(self.output)}

    @property
    def result(self) -> Permutation:
        return self.input if self.inverse else self.output

    def widths(self) -> Tuple[int, int, int, int]:
        """(width, depth, llp + 1, lrrp + 1) along the chain; all equal for n >= 1."""
        return (
            self.dyck.width,
            self.plane.depth,
            cs.llp(self.shape) + 1,
            cs.lrrp(self.gamma_shape) + 1,
        )


class UpsilonPipeline:
    """
    Step maps of Upsilon and their inverses.

    Each step is a method so a variant pipeline (for instance one with a
    faulty gamma) can be handed to the verification suite.
    """

    name = "upsilon"

    def rho(self, perm: Permutation) -> DyckPath:
        return cs.rho(perm)

    def rho_inv(self, path: DyckPath) -> Permutation:
        return cs.rho_inv(path)

    def tau_inv(self, path: DyckPath) -> PlaneTree:
        return cs.tau_inv(path)

    def tau(self, tree: PlaneTree) -> DyckPath:
        return cs.tau(tree)

    def phi(self, tree: PlaneTree) -> Tree:
        return cs.phi(tree)

    def phi_inv(self, shape: Tree) -> PlaneTree:
        return cs.phi_inv(shape)

    def gamma(self, shape: Tree) -> Tree:
        return cs.gamma(shape)

    def gamma_inv(self, shape: Tree) -> Tree:
        return cs.gamma(shape)

    def read_word(self, shape: Tree) -> Permutation:
        return cs.tree_to_perm213(shape)

    def read_shape(self, perm: Permutation) -> Tree:
        return cs.shape_of(cs.lambda_map(perm))

    def trace(self, perm: PermLike) -> UpsilonTrace:
        pi = as_perm(perm)
        require_avoids(pi, (3, 2, 1))
        dyck = self.rho(pi)
        plane = self.tau_inv(dyck)
        shape = self.phi(plane)
        gamma_shape = self.gamma(shape)
        output = self.read_word(gamma_shape)
        return UpsilonTrace(pi, dyck, plane, shape, gamma_shape, output)

    def inverse_trace(self, perm: PermLike) -> UpsilonTrace:
        sigma = as_perm(perm)
        require_avoids(sigma, (2, 1, 3))
        gamma_shape = self.read_shape(sigma)
        shape = self.gamma_inv(gamma_shape)
        plane = self.phi_inv(shape)
        dyck = self.tau(plane)
        pi = self.rho_inv(dyck)
        return UpsilonTrace(pi, dyck, plane, shape, gamma_shape, sigma, inverse=True)

    def map(self, perm: PermLike) -> Permutation:
        return self.trace(perm).output

    def inverse(self, perm: PermLike) -> Permutation:
        return self.inverse_trace(perm).input


DEFAULT_PIPELINE = UpsilonPipeline()


def upsilon(perm: PermLike) -> Permutation:
    """Map a 321-avoider to the 213-avoider with the same sort depth."""
    return DEFAULT_PIPELINE.map(perm)


def upsilon_inv(perm: PermLike) -> Permutation:
    return DEFAULT_PIPELINE.inverse(perm)


def upsilon_trace(perm: PermLike) -> UpsilonTrace:
    return DEFAULT_PIPELINE.trace(perm)


def upsilon_inverse_trace(perm: PermLike) -> UpsilonTrace:
    return DEFAULT_PIPELINE.inverse_trace(perm)


# ---------------------------------------------------------------- 213 <-> 213 tree map

def conj2_shape_map(perm: PermLike) -> Permutation:
    """
    Mirror the shape of lambda(perm) with gamma then beta and read it back
    under natural labeling. No avoidance check.
    """
    shape = cs.shape_of(cs.lambda_map(perm))
    return cs.tree_to_perm213(cs.beta(cs.gamma(shape)))


def conj2_bijection(perm: PermLike) -> Permutation:
    """
    213-avoiders avoiding 23...(t+2)1 onto 213-avoiders avoiding
    12...(t+2): lrp of the new shape equals lrrp of the old one.
    """
    require_avoids(perm, (2, 1, 3))
    return conj2_shape_map(perm)


def conj2_bijection_inv(perm: PermLike) -> Permutation:
    require_avoids(perm, (2, 1, 3))
    shape = cs.shape_of(cs.lambda_map(perm))
    return cs.tree_to_perm213(cs.gamma(cs.beta(shape)))


def reverse_complement(perm: PermLike) -> Permutation:
    return reverse(complement(perm))


def from_132_class(perm: PermLike) -> Tuple[Permutation, Permutation]:
    """
    Send a (132, 12...(t+2))-avoider to the t-stack-sortable 213-avoider
    and 321-avoider that correspond to it.

    Returns:
        (213-avoider, 321-avoider)
    """
    require_avoids(perm, (1, 3, 2))
    sigma = conj2_bijection_inv(reverse_complement(perm))
    return sigma, upsilon_inv(sigma)
