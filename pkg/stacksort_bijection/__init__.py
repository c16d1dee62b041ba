"""
Stack-sorting bijection toolkit: the sort-depth preserving bijection between
321-avoiding and 213-avoiding permutations, the Catalan structures it passes
through, and an exhaustive checker for the statements around it.
"""

__version__ = "1.0.0"

from stacksort_bijection.core.perm_core import (  # noqa: E402
    Permutation,
    classic_stats,
    contains,
    parse_permutation,
    refined_stats,
    sort_depth,
    stack_sort,
)
from stacksort_bijection.core.upsilon import (  # noqa: E402
    conj2_bijection,
    upsilon,
    upsilon_inv,
    upsilon_trace,
)

__all__ = [
    "__version__",
    "Permutation",
    "classic_stats",
    "conj2_bijection",
    "contains",
    "parse_permutation",
    "refined_stats",
    "sort_depth",
    "stack_sort",
    "upsilon",
    "upsilon_inv",
    "upsilon_trace",
]
