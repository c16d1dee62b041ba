"""
Exhaustive generation, counting tables and the verification suite.

Scans over all of S_n are split by first letter; each partition is an
independent task for a multiprocessing pool and returns a Counter, merged
in first-letter order so results do not depend on the number of workers.
"""

import csv
import io
import itertools
import json
import time
from collections import Counter
from datetime import datetime, timezone
from functools import lru_cache
from math import comb, factorial
from multiprocessing import Pool
from typing import (
    Any,
    Callable,
    Dict,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

from pydantic import BaseModel, Field, computed_field, field_validator
from tqdm import tqdm

from stacksort_bijection import __version__
from stacksort_bijection.core import catalan_structs as cs
from stacksort_bijection.core import perm_core as pc
from stacksort_bijection.core import sort_dynamics as sd
from stacksort_bijection.core import upsilon as up
from stacksort_bijection.core.errors import EnumerationLimitError
from stacksort_bijection.core.perm_core import Permutation
from stacksort_bijection.utils.logger import get_logger

logger = get_logger(__name__)

MAX_N = 12
VERIFY_MAX_N = 10
TREE_MAX_N = 8
SCAN_MAX_N = 9
PAIR_SCAN_MAX_N = 8
CONTAINS_MAX_N = 7

THETA_WORKED_TREE = (
    "(1 (2 - (4 - -)) (3 (5 - (7 - (8 - -))) (6 - (9 - (10 - (11 - (12 - "
    "(13 (14 - -) (15 - (16 - -))))))))))"
)

Pattern = Tuple[int, ...]


def _check_n(n: int, cap: int = MAX_N):
    if n < 0 or n > cap:
        raise EnumerationLimitError(f"n={n} is outside the supported range 0..{cap}")


def _normalize_patterns(patterns: Iterable[Sequence[int]]) -> Tuple[Pattern, ...]:
    normalized = []
    for p in patterns:
        normalized.append(Permutation(tuple(p)).values)
    return tuple(sorted(set(normalized)))


# ---------------------------------------------------------------- generators

def permutations(n: int) -> Iterator[Permutation]:
    """All of S_n in lexicographic order."""
    _check_n(n)
    for values in itertools.permutations(range(1, n + 1)):
        yield Permutation(values, check=False)


def permutations_with_first(n: int, first: int) -> Iterator[Tuple[int, ...]]:
    """Lexicographic block of S_n whose first letter is `first`, as tuples."""
    rest = [v for v in range(1, n + 1) if v != first]
    for tail in itertools.permutations(rest):
        yield (first,) + tail


@lru_cache(maxsize=None)
def _avoiders(n: int, patterns: Tuple[Pattern, ...]) -> Tuple[Permutation, ...]:
    if n == 0:
        return (Permutation(()),)
    found = []
    for sigma in _avoiders(n - 1, patterns):
        w = sigma.values
        for i in range(n):
            candidate = w[:i] + (n,) + w[i:]
            if pc.avoids_all(candidate, patterns):
                found.append(Permutation(candidate, check=False))
    found.sort()
    return tuple(found)


def avoiders(n: int, patterns: Iterable[Sequence[int]]) -> Tuple[Permutation, ...]:
    """
    S_n(P) in lexicographic order, grown by inserting n into the members
    of S_{n-1}(P).
    """
    _check_n(n)
    return _avoiders(n, _normalize_patterns(patterns))


@lru_cache(maxsize=None)
def binary_shapes(n: int) -> Tuple[Optional[cs.BinaryTree], ...]:
    if n == 0:
        return (None,)
    shapes = []
    for k in range(n):
        for left in binary_shapes(k):
            for right in binary_shapes(n - 1 - k):
                shapes.append(cs.BinaryTree(None, left, right))
    return tuple(shapes)


@lru_cache(maxsize=None)
def _forests(edges: int) -> Tuple[Tuple[cs.PlaneTree, ...], ...]:
    if edges == 0:
        return ((),)
    forests = []
    for first_edges in range(edges):
        for first_children in _forests(first_edges):
            for rest in _forests(edges - 1 - first_edges):
                forests.append((cs.PlaneTree(first_children),) + rest)
    return tuple(forests)


def plane_trees(n: int) -> Tuple[cs.PlaneTree, ...]:
    """Plane trees with n edges."""
    return tuple(cs.PlaneTree(children) for children in _forests(n))


@lru_cache(maxsize=None)
def dyck_paths(n: int) -> Tuple[cs.DyckPath, ...]:
    words: List[str] = []

    def grow(prefix: str, east: int, north: int):
        if east == n and north == n:
            words.append(prefix)
            return
        if east < n:
            grow(prefix + "E", east + 1, north)
        if north < east:
            grow(prefix + "N", east, north + 1)

    grow("", 0, 0)
    return tuple(cs.DyckPath(w) for w in words)


def reference_counts(n: int, kind: str) -> int:
    """
    Closed forms evaluated with exact integers.

    kind: "catalan" for C_n = binom(2n, n) / (n + 1), "west2" for
    2 (3n)! / ((n + 1)! (2n + 1)!), "factorial" for n!.
    """
    _check_n(n)
    if kind == "catalan":
        return comb(2 * n, n) // (n + 1)
    if kind == "west2":
        numerator = 2 * factorial(3 * n)
        denominator = factorial(n + 1) * factorial(2 * n + 1)
        if numerator % denominator:
            raise ArithmeticError(f"west2({n}) is not an integer")
        return numerator // denominator
    if kind == "factorial":
        return factorial(n)
    raise ValueError(f"unknown reference kind {kind!r}")


# ---------------------------------------------------------------- classes

EXTRA_PREDICATES: Dict[str, Callable[[Tuple[int, ...]], bool]] = {
    "tailed_213": sd.is_tailed_213,
    "tree_321": lambda w: sd.is_321_tree(cs.lambda_map(w)),
}


class ClassSpec(BaseModel):
    n: int = Field(ge=0, le=MAX_N)
    patterns: List[List[int]] = Field(default_factory=list)
    t: Optional[int] = Field(default=None, ge=0)
    extra: List[str] = Field(default_factory=list)

    @field_validator("patterns")
    @classmethod
    def _valid_patterns(cls, value: List[List[int]]) -> List[List[int]]:
        return [list(p) for p in _normalize_patterns(value)]

    @field_validator("extra")
    @classmethod
    def _known_extras(cls, value: List[str]) -> List[str]:
        for name in value:
            if name not in EXTRA_PREDICATES:
                raise ValueError(f"unknown class predicate {name!r}; "
                                 f"expected one of {', '.join(sorted(EXTRA_PREDICATES))}")
        return value

    def admits(self, w: Tuple[int, ...]) -> bool:
        if not pc.avoids_all(w, self.patterns):
            return False
        if any(not EXTRA_PREDICATES[name](w) for name in self.extra):
            return False
        return self.t is None or pc.sort_depth(w) <= self.t


def class_members(spec: ClassSpec) -> Iterator[Permutation]:
    """Members of the class in lexicographic order."""
    source: Iterable[Permutation]
    if spec.patterns:
        source = avoiders(spec.n, spec.patterns)
    else:
        source = permutations(spec.n)
    for perm in source:
        if spec.admits(perm.values):
            yield perm


# ---------------------------------------------------------------- partitioned scans

class ScanResult(NamedTuple):
    counter: Counter
    failure: Optional[Tuple[int, ...]]


def _task_depth(w, params):
    return pc.sort_depth(w), True


def _task_sort_agreement(w, params):
    expected = pc.stack_sort(w)
    steps = pc.relocation_steps(w)
    relocated = steps[-1][1].values if steps else w
    return None, (pc.stack_sort_dynamic(w) == expected and pc.stack_sort_west(w) == expected
                  and relocated == expected.values)


def _task_split_321(w, params):
    return None, pc.avoids(w, (3, 2, 1)) == pc.is_321_avoiding_by_split(w)


def _task_tree_321(w, params):
    return None, sd.is_321_tree(cs.lambda_map(w)) == pc.avoids(w, (3, 2, 1))


def _task_tailed_equivalence(w, params):
    return None, sd.is_tailed_213(w) == sd.is_tailed_tree(cs.lambda_map(w))


def _task_lrrp_decrement(w, params):
    return None, sd.lrrp_decrements(cs.lambda_map(w))


def _task_tailed_phi(w, params):
    """Phi realizes S on tailed 213-avoiders, and S keeps them tailed."""
    if not sd.is_tailed_213(w):
        return None, True
    tree = cs.lambda_map(w)
    image = pc.stack_sort(w)
    ok = cs.in_order(sd.Phi(tree)) == image.values and sd.is_tailed_213(image)
    ok = ok and sd.pre_tail_maxima(w) == sd.right_leaves(tree) \
        and pc.tail(w) == sd.tree_tail(tree)
    return "tailed", ok


def _task_phi_beyond_tailed(w, params):
    if sd.is_tailed_213(w):
        return None, True
    agrees = cs.in_order(sd.Phi(cs.lambda_map(w))) == pc.stack_sort(w).values
    return ("agrees" if agrees else "differs"), True


def _task_contains(w, params):
    for pattern in params:
        if pc.contains(w, pattern) != pc.contains_naive(w, pattern):
            return None, False
    return None, True


def _task_table(w, params):
    patterns, extra, statistics = params
    if not pc.avoids_all(w, patterns):
        return None, True
    if any(not EXTRA_PREDICATES[name](w) for name in extra):
        return None, True
    return (pc.sort_depth(w), tuple(pc.STAT_FUNCTIONS[s](w) for s in statistics)), True


SCAN_TASKS: Dict[str, Callable] = {
    "depth": _task_depth,
    "sort_agreement": _task_sort_agreement,
    "split_321": _task_split_321,
    "tree_321": _task_tree_321,
    "tailed_equivalence": _task_tailed_equivalence,
    "lrrp_decrement": _task_lrrp_decrement,
    "tailed_phi": _task_tailed_phi,
    "phi_beyond_tailed": _task_phi_beyond_tailed,
    "contains": _task_contains,
    "table": _task_table,
}


def _scan_partition(args) -> ScanResult:
    task, n, first, params = args
    fn = SCAN_TASKS[task]
    counter: Counter = Counter()
    failure = None
    for w in permutations_with_first(n, first):
        key, ok = fn(w, params)
        if key is not None:
            counter[key] += 1
        if not ok and failure is None:
            failure = w
    return ScanResult(counter, failure)


def scan(task: str, n: int, jobs: int = 1, params: Any = None,
         progress: bool = False) -> ScanResult:
    """
    Run a registered per-permutation task over all of S_n.

    Args:
        task: Name in SCAN_TASKS
        n: Permutation length
        jobs: Worker processes (1 runs in-process)
        params: Extra picklable argument handed to the task
        progress: Show a tqdm bar on stderr

    Returns:
        Merged Counter of task keys and the lexicographically first failure
    """
    _check_n(n)
    if n == 0:
        key, ok = SCAN_TASKS[task]((), params)
        counter = Counter({key: 1}) if key is not None else Counter()
        return ScanResult(counter, None if ok else ())
    args = [(task, n, first, params) for first in range(1, n + 1)]
    bar = dict(total=n, disable=not progress, desc=f"{task} n={n}", leave=False)
    if jobs > 1:
        with Pool(min(jobs, n)) as pool:
            results = list(tqdm(pool.imap(_scan_partition, args), **bar))
    else:
        results = [_scan_partition(a) for a in tqdm(args, **bar)]
    merged: Counter = Counter()
    failure = None
    for result in results:
        merged.update(result.counter)
        if failure is None and result.failure is not None:
            failure = result.failure
    return ScanResult(merged, failure)


# ---------------------------------------------------------------- count tables

class CountRow(BaseModel):
    n: int
    t: Optional[int] = None
    stats: Dict[str, int] = Field(default_factory=dict)
    count: int


class CountTable(BaseModel):
    patterns: List[str] = Field(default_factory=list)
    extra: List[str] = Field(default_factory=list)
    statistics: List[str] = Field(default_factory=list)
    rows: List[CountRow] = Field(default_factory=list)
    generated_at: str = ""
    tool_version: str = __version__

    def totals(self) -> Dict[Tuple[int, Optional[int]], int]:
        out: Dict[Tuple[int, Optional[int]], int] = {}
        for row in self.rows:
            key = (row.n, row.t)
            out[key] = out.get(key, 0) + row.count
        return out

    def to_csv(self) -> str:
        buffer = io.StringIO()
        buffer.write(f"# patterns: {' '.join(self.patterns)}\n")
        buffer.write(f"# extra: {' '.join(self.extra)}\n")
        buffer.write(f"# generated_at: {self.generated_at}\n")
        buffer.write(f"# tool_version: {self.tool_version}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["n", "t", *self.statistics, "count"])
        for row in self.rows:
            writer.writerow([row.n, "" if row.t is None else row.t,
                             *(row.stats[s] for s in self.statistics), row.count])
        return buffer.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.model_dump(), indent=2)

    def to_text(self) -> str:
        header = ["n", "t", *self.statistics, "count"]
        body = [[str(r.n), "-" if r.t is None else str(r.t),
                 *(str(r.stats[s]) for s in self.statistics), str(r.count)]
                for r in self.rows]
        widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
        lines = []
        if self.patterns or self.extra:
            lines.append(f"class: avoid {' '.join(self.patterns) or '-'}"
                         f"; extra {' '.join(self.extra) or '-'}")
        for row in [header, *body]:
            lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
        return "\n".join(lines)


def _pattern_str(p: Sequence[int]) -> str:
    return "".join(map(str, p)) if len(p) < 10 else "-".join(map(str, p))


def _tally_members(words: Sequence[Tuple[int, ...]], params: Any) -> Counter:
    by_key: Counter = Counter()
    for w in words:
        key, _ = _task_table(w, params)
        if key is not None:
            by_key[key] += 1
    return by_key


def _tally_chunk(args) -> Counter:
    return _tally_members(*args)


def _tally_avoiders(n: int, patterns: Tuple[Pattern, ...], params: Any, jobs: int = 1,
                    progress: bool = False) -> Counter:
    """Tally the table keys of S_n(patterns), split into chunks across a pool when jobs > 1."""
    words = [perm.values for perm in avoiders(n, patterns)]
    if jobs <= 1 or len(words) < 2:
        return _tally_members(words, params)
    size = -(-len(words) // (jobs * 4))
    chunks = [(words[i:i + size], params) for i in range(0, len(words), size)]
    bar = dict(total=len(chunks), disable=not progress, desc=f"table n={n}", leave=False)
    with Pool(min(jobs, len(chunks))) as pool:
        parts = list(tqdm(pool.imap(_tally_chunk, chunks), **bar))
    merged: Counter = Counter()
    for part in parts:
        merged.update(part)
    return merged


def count_table(n_values: Sequence[int], t_values: Optional[Sequence[int]] = None,
                patterns: Iterable[Sequence[int]] = (), statistics: Sequence[str] = (),
                extra: Sequence[str] = (), jobs: int = 1,
                progress: bool = False) -> CountTable:
    """
    Joint distribution of the selected statistics over each class
    S_n^t(P) (restricted further by the extra predicates).

    Rows are keyed by (n, t, statistic vector) and listed in sorted order;
    with no statistics selected every (n, t) gets one row, zero counts
    included. t = None means no sortability bound.
    """
    pats = _normalize_patterns(patterns)
    for name in statistics:
        if name not in pc.STAT_FUNCTIONS:
            raise ValueError(f"unknown statistic {name!r}")
    for name in extra:
        if name not in EXTRA_PREDICATES:
            raise ValueError(f"unknown class predicate {name!r}")
    ts: List[Optional[int]] = [None] if t_values is None else list(t_values)
    logger.info(f"count_table n={list(n_values)} t={ts} patterns={pats} stats={list(statistics)}")

    rows: List[CountRow] = []
    for n in n_values:
        _check_n(n)
        params = (pats, tuple(extra), tuple(statistics))
        if pats:
            by_key = _tally_avoiders(n, pats, params, jobs=jobs, progress=progress)
        else:
            by_key = scan("table", n, jobs=jobs, params=params, progress=progress).counter

        for t in ts:
            grouped: Counter = Counter()
            for (depth, vector), count in by_key.items():
                if t is None or depth <= t:
                    grouped[vector] += count
            if not statistics and not grouped:
                grouped[()] = 0
            for vector in sorted(grouped):
                rows.append(CountRow(n=n, t=t, stats=dict(zip(statistics, vector)),
                                     count=grouped[vector]))

    return CountTable(
        patterns=[_pattern_str(p) for p in pats],
        extra=list(extra),
        statistics=list(statistics),
        rows=rows,
        generated_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )


# ---------------------------------------------------------------- verification

class CheckResult(BaseModel):
    name: str
    scope: str
    passed: bool
    asserted: bool = True
    counterexample: Optional[Dict[str, Any]] = None
    details: Dict[str, Any] = Field(default_factory=dict)
    seconds: float = 0.0


class VerifyReport(BaseModel):
    n_max: int
    t_max: Optional[int] = None
    tree_n_max: int
    jobs: int = 1
    pipeline: str = "upsilon"
    generated_at: str = ""
    tool_version: str = __version__
    checks: List[CheckResult] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.asserted)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if c.asserted and not c.passed]

    def check(self, name: str) -> CheckResult:
        for result in self.checks:
            if result.name == name:
                return result
        raise KeyError(name)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(), indent=2, default=str)

    def summary_text(self) -> str:
        lines = []
        for c in self.checks:
            if not c.asserted:
                status = "INFO"
            else:
                status = "PASS" if c.passed else "FAIL"
            lines.append(f"{status}  {c.name:<32} {c.scope:<28} {c.seconds:7.2f}s")
            if c.asserted and not c.passed and c.counterexample:
                lines.append(f"      counterexample: {json.dumps(c.counterexample, default=str)}")
            if not c.asserted and c.details:
                lines.append(f"      {json.dumps(c.details, default=str)}")
        failed = len(self.failures)
        lines.append(f"{len(self.checks)} checks, {failed} failed"
                     f" -> {'OK' if self.passed else 'FAILED'}")
        return "\n".join(lines)


class Outcome(NamedTuple):
    passed: bool
    scope: str
    counterexample: Optional[Dict[str, Any]] = None
    details: Dict[str, Any] = {}


class CheckDef(NamedTuple):
    name: str
    fn: Callable[["VerifyContext"], Outcome]
    asserted: bool


CHECKS: List[CheckDef] = []


def register_check(name: str, asserted: bool = True):
    def decorator(fn):
        CHECKS.append(CheckDef(name, fn, asserted))
        return fn
    return decorator


class VerifyContext:
    """Limits, the pipeline under test and per-run caches shared by the checks."""

    def __init__(self, n_max: int, t_max: Optional[int], tree_n_max: int, jobs: int,
                 pipeline: up.UpsilonPipeline, progress: bool):
        self.n_max = n_max
        self.t_max = t_max
        self.tree_n_max = tree_n_max
        self.jobs = jobs
        self.pipeline = pipeline
        self.progress = progress
        self._traces: Dict[int, List[Tuple[Permutation, up.UpsilonTrace]]] = {}
        self._depths: Dict[int, Counter] = {}

    def ns(self, cap: int = VERIFY_MAX_N) -> range:
        return range(1, min(self.n_max, cap) + 1)

    def ts(self, n: int, start: int = 0) -> range:
        upper = n - 1 if self.t_max is None else min(self.t_max, n - 1)
        return range(start, upper + 1)

    def scope(self, cap: int = VERIFY_MAX_N, extra: str = "") -> str:
        top = min(self.n_max, cap)
        return f"n<={top}" + (f", {extra}" if extra else "")

    def traces(self, n: int) -> List[Tuple[Permutation, up.UpsilonTrace]]:
        if n not in self._traces:
            self._traces[n] = [(pi, self.pipeline.trace(pi)) for pi in avoiders(n, [(3, 2, 1)])]
        return self._traces[n]

    def depth_counts(self, n: int) -> Counter:
        if n not in self._depths:
            self._depths[n] = scan("depth", n, jobs=self.jobs, progress=self.progress).counter
        return self._depths[n]


def _pass(scope: str, **details) -> Outcome:
    return Outcome(True, scope, None, details)


def _fail(scope: str, counterexample: Dict[str, Any], **details) -> Outcome:
    return Outcome(False, scope, counterexample, details)


def _perm_str(w) -> str:
    return " ".join(map(str, w))


def _depth_of(pi: Permutation, depths: Dict[Permutation, int]) -> int:
    if pi not in depths:
        depths[pi] = pc.sort_depth(pi)
    return depths[pi]


# -- counts

@register_check("catalan_counts")
def _check_catalan_counts(ctx: VerifyContext) -> Outcome:
    counts = {}
    for n in ctx.ns():
        expected = reference_counts(n, "catalan")
        for pattern in itertools.permutations((1, 2, 3)):
            got = len(avoiders(n, [pattern]))
            if got != expected:
                return _fail(ctx.scope(), {"n": n, "pattern": _pattern_str(pattern),
                                           "expected": expected, "got": got})
        counts[n] = expected
    return _pass(ctx.scope(extra="all patterns of length 3"), counts=counts)


@register_check("carrier_counts")
def _check_carrier_counts(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns():
        expected = reference_counts(n, "catalan")
        got = (len(binary_shapes(n)), len(plane_trees(n)), len(dyck_paths(n)))
        if got != (expected,) * 3:
            return _fail(ctx.scope(), {"n": n, "expected": expected,
                                       "shapes_plane_dyck": list(got)})
    return _pass(ctx.scope())


@register_check("sortable_counts")
def _check_sortable_counts(ctx: VerifyContext) -> Outcome:
    """|S_n^1| = C_n and |S_n^2| = west2(n) by scanning all of S_n."""
    table = {}
    for n in ctx.ns(SCAN_MAX_N):
        depths = ctx.depth_counts(n)
        one = sum(c for d, c in depths.items() if d <= 1)
        two = sum(c for d, c in depths.items() if d <= 2)
        if one != reference_counts(n, "catalan") or two != reference_counts(n, "west2"):
            return _fail(ctx.scope(SCAN_MAX_N), {
                "n": n, "t1": one, "catalan": reference_counts(n, "catalan"),
                "t2": two, "west2": reference_counts(n, "west2")})
        if max(depths) > max(n - 1, 0):
            return _fail(ctx.scope(SCAN_MAX_N), {"n": n, "max_depth": max(depths)})
        table[n] = {"t1": one, "t2": two}
    return _pass(ctx.scope(SCAN_MAX_N), counts=table)


@register_check("sortable_class_sizes")
def _check_equal_class_sizes(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns():
        d321 = Counter(pc.sort_depth(p) for p in avoiders(n, [(3, 2, 1)]))
        d213 = Counter(pc.sort_depth(p) for p in avoiders(n, [(2, 1, 3)]))
        for t in ctx.ts(n):
            a = sum(c for d, c in d321.items() if d <= t)
            b = sum(c for d, c in d213.items() if d <= t)
            if a != b:
                return _fail(ctx.scope(), {"n": n, "t": t, "321": a, "213": b})
    return _pass(ctx.scope(extra="all t"))


@register_check("sortable_class_sizes_near_n")
def _check_boundary_t(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns():
        d321 = Counter(pc.sort_depth(p) for p in avoiders(n, [(3, 2, 1)]))
        d213 = Counter(pc.sort_depth(p) for p in avoiders(n, [(2, 1, 3)]))
        for t in range(max(n - 4, 0), n):
            a = sum(c for d, c in d321.items() if d <= t)
            b = sum(c for d, c in d213.items() if d <= t)
            if a != b:
                return _fail(ctx.scope(), {"n": n, "t": t, "321": a, "213": b})
    return _pass(ctx.scope(extra="t in n-4..n-1"))


# -- perm_core

@register_check("stack_sort_agreement")
def _check_stack_sort_agreement(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(PAIR_SCAN_MAX_N):
        result = scan("sort_agreement", n, jobs=ctx.jobs, progress=ctx.progress)
        if result.failure is not None:
            w = result.failure
            return _fail(ctx.scope(PAIR_SCAN_MAX_N), {
                "perm": _perm_str(w), "recursive": str(pc.stack_sort(w)),
                "dynamic": str(pc.stack_sort_dynamic(w)), "west": str(pc.stack_sort_west(w))})
    return _pass(ctx.scope(PAIR_SCAN_MAX_N, "recursive = relocation = single stack"))


@register_check("split_321")
def _check_split_321(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(SCAN_MAX_N):
        result = scan("split_321", n, jobs=ctx.jobs, progress=ctx.progress)
        if result.failure is not None:
            return _fail(ctx.scope(SCAN_MAX_N), {"perm": _perm_str(result.failure)})
    return _pass(ctx.scope(SCAN_MAX_N))


@register_check("contains_crosscheck")
def _check_contains(ctx: VerifyContext) -> Outcome:
    patterns = ((3, 2, 1), (2, 1, 3), (1, 3, 2), (2, 3, 4, 1), (1, 2, 3, 4))
    for n in ctx.ns(CONTAINS_MAX_N):
        result = scan("contains", n, jobs=ctx.jobs, params=patterns, progress=ctx.progress)
        if result.failure is not None:
            return _fail(ctx.scope(CONTAINS_MAX_N), {"perm": _perm_str(result.failure)})
    return _pass(ctx.scope(CONTAINS_MAX_N, "backtracking vs brute force"))


@register_check("mlw_equals_sort_depth")
def _check_mlw_depth(ctx: VerifyContext) -> Outcome:
    """sort_depth = mlw = g(lambda(pi)) and inv = sum of lw on 321-avoiders."""
    for n in ctx.ns():
        for pi in avoiders(n, [(3, 2, 1)]):
            depth = pc.sort_depth(pi)
            m = pc.mlw(pi)
            g = sd.g(cs.lambda_map(pi))
            lw_sum = sum(pc.lw_values(pi).values())
            if not (depth == m == g) or pc.inv(pi) != lw_sum:
                return _fail(ctx.scope(), {"perm": str(pi), "sort_depth": depth, "mlw": m,
                                           "g": g, "inv": pc.inv(pi), "lw_sum": lw_sum})
    return _pass(ctx.scope())


@register_check("mlw_pattern_321")
def _check_mlw_pattern(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns():
        for pi in avoiders(n, [(3, 2, 1)]):
            m = pc.mlw(pi)
            for t in ctx.ts(n, start=1):
                if pc.avoids(pi, pc.long_cycle_pattern(t)) != (m <= t):
                    return _fail(ctx.scope(), {"perm": str(pi), "t": t, "mlw": m})
    return _pass(ctx.scope(extra="t>=1"))


# -- catalan_structs

@register_check("lrrp_equals_sort_depth")
def _check_lrrp_depth(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns():
        for pi in avoiders(n, [(2, 1, 3)]):
            depth = pc.sort_depth(pi)
            value = cs.lrrp(cs.lambda_map(pi))
            if depth != value:
                return _fail(ctx.scope(), {"perm": str(pi), "sort_depth": depth, "lrrp": value})
    return _pass(ctx.scope())


@register_check("lrrp_pattern_213")
def _check_lrrp_pattern(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns():
        for pi in avoiders(n, [(2, 1, 3)]):
            value = cs.lrrp(cs.lambda_map(pi))
            for t in ctx.ts(n, start=1):
                if pc.avoids(pi, pc.long_cycle_pattern(t)) != (value <= t):
                    return _fail(ctx.scope(), {"perm": str(pi), "t": t, "lrrp": value})
    return _pass(ctx.scope(extra="t>=1"))


@register_check("lrp_increasing_pattern_213")
def _check_lrp_pattern(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns():
        for pi in avoiders(n, [(2, 1, 3)]):
            value = cs.lrp(cs.lambda_map(pi))
            for t in ctx.ts(n, start=1):
                if pc.avoids(pi, pc.increasing_pattern(t + 2)) != (value <= t):
                    return _fail(ctx.scope(), {"perm": str(pi), "t": t, "lrp": value})
    return _pass(ctx.scope(extra="t>=1"))


@register_check("rho_roundtrip")
def _check_rho(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(SCAN_MAX_N):
        seen = set()
        for pi in avoiders(n, [(3, 2, 1)]):
            path = cs.rho(pi)
            back = cs.rho_inv(path)
            if back != pi or path.width != pc.mlw(pi) + 1:
                return _fail(ctx.scope(SCAN_MAX_N), {"perm": str(pi), "path": str(path),
                                                     "rho_inv": str(back), "width": path.width})
            seen.add(path)
        if seen != set(dyck_paths(n)):
            return _fail(ctx.scope(SCAN_MAX_N), {"n": n, "image_size": len(seen),
                                                 "dyck_paths": len(dyck_paths(n))})
    return _pass(ctx.scope(SCAN_MAX_N, "onto D_n, width = mlw + 1"))


@register_check("class_restrictions")
def _check_class_restrictions(ctx: VerifyContext) -> Outcome:
    """|D_{n,t}| = |T_{n,t}| = |B_{n,t}| = |S_n^t(321)| with tau and phi respecting the bounds."""
    for n in ctx.ns(ctx.tree_n_max):
        depths = Counter(pc.sort_depth(p) for p in avoiders(n, [(3, 2, 1)]))
        for tree in plane_trees(n):
            path = cs.tau(tree)
            shape = cs.phi(tree)
            if path.width != tree.depth or cs.llp(shape) != tree.depth - 1:
                return _fail(ctx.scope(ctx.tree_n_max), {
                    "plane": str(tree), "width": path.width, "depth": tree.depth,
                    "llp": cs.llp(shape)})
        for t in ctx.ts(n):
            d = sum(1 for p in dyck_paths(n) if p.in_class(t))
            tt = sum(1 for p in plane_trees(n) if p.depth <= t + 1)
            b = sum(1 for s in binary_shapes(n) if cs.llp(s) <= t)
            s = sum(c for k, c in depths.items() if k <= t)
            if not d == tt == b == s:
                return _fail(ctx.scope(ctx.tree_n_max), {"n": n, "t": t, "D": d, "T": tt,
                                                         "B": b, "S321": s})
    return _pass(ctx.scope(ctx.tree_n_max))


@register_check("carrier_roundtrips")
def _check_carrier_roundtrips(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(ctx.tree_n_max):
        for tree in plane_trees(n):
            if cs.tau_inv(cs.tau(tree)) != tree or cs.phi_inv(cs.phi(tree)) != tree:
                return _fail(ctx.scope(ctx.tree_n_max), {"plane": str(tree)})
            if len(cs.right_arm(cs.phi(tree))) != len(tree.children):
                return _fail(ctx.scope(ctx.tree_n_max), {"plane": str(tree), "arm": "mismatch"})
        for path in dyck_paths(n):
            if cs.tau(cs.tau_inv(path)) != path:
                return _fail(ctx.scope(ctx.tree_n_max), {"path": str(path)})
        for shape in binary_shapes(n):
            if cs.phi(cs.phi_inv(shape)) != shape:
                return _fail(ctx.scope(ctx.tree_n_max), {"shape": cs.serialize_tree(shape)})
            if cs.parse_tree(cs.serialize_tree(shape)) != shape:
                return _fail(ctx.scope(ctx.tree_n_max), {"shape": cs.serialize_tree(shape)})
    for n in ctx.ns(min(ctx.tree_n_max, PAIR_SCAN_MAX_N)):
        for perm in permutations(n):
            if cs.in_order(cs.lambda_map(perm)) != perm.values:
                return _fail(ctx.scope(ctx.tree_n_max), {"perm": str(perm)})
    return _pass(ctx.scope(ctx.tree_n_max, "tau, phi, lambda, serialization"))


@register_check("gamma_involution")
def _check_gamma(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(ctx.tree_n_max):
        for shape in binary_shapes(n):
            mirrored = cs.gamma(shape)
            flipped = cs.beta(shape)
            ok = (cs.gamma(mirrored) == shape
                  and cs.lrrp(mirrored) == cs.llp(shape) and cs.llp(mirrored) == cs.lrrp(shape)
                  and cs.llp(flipped) == cs.lrp(shape) and cs.lrp(flipped) == cs.llp(shape))
            if not ok:
                return _fail(ctx.scope(ctx.tree_n_max), {"shape": cs.serialize_tree(shape)})
    return _pass(ctx.scope(ctx.tree_n_max))


@register_check("natural_labeling")
def _check_natural_labeling(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(ctx.tree_n_max):
        images = set()
        for shape in binary_shapes(n):
            perm = cs.tree_to_perm213(shape)
            if not pc.avoids(perm, (2, 1, 3)) or cs.perm213_to_tree(perm) != shape:
                return _fail(ctx.scope(ctx.tree_n_max), {"shape": cs.serialize_tree(shape),
                                                         "perm": str(perm)})
            images.add(perm)
        if len(images) != len(binary_shapes(n)):
            return _fail(ctx.scope(ctx.tree_n_max), {"n": n, "distinct": len(images)})
    return _pass(ctx.scope(ctx.tree_n_max))


# -- sort_dynamics

@register_check("phi_commutativity")
def _check_phi_commutes(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(min(ctx.tree_n_max, CONTAINS_MAX_N)):
        for perm in permutations(n):
            tree = cs.lambda_map(perm)
            leaves = sd.right_leaves(tree)
            for u, v in itertools.combinations(leaves, 2):
                a = sd.phi_v(sd.phi_v(tree, u), v)
                b = sd.phi_v(sd.phi_v(tree, v), u)
                if a != b:
                    return _fail(ctx.scope(CONTAINS_MAX_N), {"perm": str(perm), "u": u, "v": v})
    return _pass(ctx.scope(min(ctx.tree_n_max, CONTAINS_MAX_N)))


@register_check("tailed_phi")
def _check_tailed_phi(ctx: VerifyContext) -> Outcome:
    """Phi realizes S on tailed 213-avoiders, S keeps them tailed, and leaves/tails match."""
    sizes = {}
    for n in ctx.ns(SCAN_MAX_N):
        result = scan("tailed_phi", n, jobs=ctx.jobs, progress=ctx.progress)
        if result.failure is not None:
            w = result.failure
            return _fail(ctx.scope(SCAN_MAX_N), {
                "perm": _perm_str(w), "S": str(pc.stack_sort(w)),
                "Phi": _perm_str(cs.in_order(sd.Phi(cs.lambda_map(w))))})
        sizes[n] = result.counter.get("tailed", 0)
    return _pass(ctx.scope(SCAN_MAX_N), tailed_counts=sizes)


@register_check("tailed_equivalence")
def _check_tailed_equivalence(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(PAIR_SCAN_MAX_N):
        result = scan("tailed_equivalence", n, jobs=ctx.jobs, progress=ctx.progress)
        if result.failure is not None:
            return _fail(ctx.scope(PAIR_SCAN_MAX_N), {"perm": _perm_str(result.failure)})
    return _pass(ctx.scope(PAIR_SCAN_MAX_N))


@register_check("lrrp_decrement")
def _check_lrrp_decrement(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(PAIR_SCAN_MAX_N):
        result = scan("lrrp_decrement", n, jobs=ctx.jobs, progress=ctx.progress)
        if result.failure is not None:
            return _fail(ctx.scope(PAIR_SCAN_MAX_N), {"perm": _perm_str(result.failure)})
    return _pass(ctx.scope(PAIR_SCAN_MAX_N, "all increasing trees"))


@register_check("tree_321_agreement")
def _check_tree_321(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(PAIR_SCAN_MAX_N):
        result = scan("tree_321", n, jobs=ctx.jobs, progress=ctx.progress)
        if result.failure is not None:
            return _fail(ctx.scope(PAIR_SCAN_MAX_N), {"perm": _perm_str(result.failure)})
    return _pass(ctx.scope(PAIR_SCAN_MAX_N))


@register_check("lambda_on_321")
def _check_lambda_321(ctx: VerifyContext) -> Outcome:
    """Right-to-left minima sit on the arm, blocks on chains, descent tops at right leaves."""
    for n in ctx.ns(SCAN_MAX_N):
        for pi in avoiders(n, [(3, 2, 1)]):
            tree = cs.lambda_map(pi)
            arm = [node.label for node in cs.right_arm(tree)]
            parts = pc.canonical_decomposition(pi)
            chains = sd.right_chains(tree)
            blocks = sorted(block for block, _ in parts if block)
            ok = (sd.is_321_tree(tree)
                  and arm == [a for _, a in parts]
                  and blocks == sorted(chains.values())
                  and pc.descent_tops(pi) == sd.right_leaves(tree))
            if not ok:
                return _fail(ctx.scope(SCAN_MAX_N), {"perm": str(pi)})
    return _pass(ctx.scope(SCAN_MAX_N))


@register_check("theta_oracle")
def _check_theta(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(SCAN_MAX_N):
        for pi in avoiders(n, [(3, 2, 1)]):
            tree = cs.lambda_map(pi)
            steps = sd.theta_steps(tree)
            after = steps[-1][2] if steps else tree
            before_g = sd.g(tree)
            ok = after == cs.lambda_map(pc.stack_sort(pi)) and sd.is_321_tree(after)
            relocated = pc.relocation_steps(pi)
            ok = ok and [v for v, _, _ in steps] == [b for b, _ in relocated]
            ok = ok and all(step == cs.lambda_map(word)
                            for (_, _, step), (_, word) in zip(steps, relocated))
            if before_g > 0:
                ok = ok and sd.g(after) == before_g - 1
            if not ok:
                return _fail(ctx.scope(SCAN_MAX_N), {
                    "perm": str(pi), "S": str(pc.stack_sort(pi)),
                    "Theta": cs.serialize_tree(after), "g": before_g})
    return _pass(ctx.scope(SCAN_MAX_N, "each theta_v step is lambda of the relocated word, g decreases"))


@register_check("sort_leaves_213", asserted=False)
def _report_213_not_closed(ctx: VerifyContext) -> Outcome:
    leaving = {}
    for n in ctx.ns():
        leaving[n] = sum(1 for pi in avoiders(n, [(2, 1, 3)])
                         if pc.contains(pc.stack_sort(pi), (2, 1, 3)))
    return _pass(ctx.scope(), images_containing_213=leaving)


@register_check("phi_beyond_tailed", asserted=False)
def _report_phi_beyond_tailed(ctx: VerifyContext) -> Outcome:
    table = {}
    for n in ctx.ns(PAIR_SCAN_MAX_N):
        counter = scan("phi_beyond_tailed", n, jobs=ctx.jobs, progress=ctx.progress).counter
        table[n] = {"agrees": counter.get("agrees", 0), "differs": counter.get("differs", 0)}
    return _pass(ctx.scope(PAIR_SCAN_MAX_N, "non-tailed inputs"), counts=table)


# -- upsilon

@register_check("upsilon_bijection")
def _check_upsilon_bijection(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(SCAN_MAX_N):
        images = {}
        for pi, trace in ctx.traces(n):
            sigma = trace.output
            if pc.contains(sigma, (2, 1, 3)):
                return _fail(ctx.scope(SCAN_MAX_N), {"perm": str(pi), "image": str(sigma)})
            if sigma in images:
                return _fail(ctx.scope(SCAN_MAX_N), {"perm": str(pi), "other": str(images[sigma]),
                                                     "image": str(sigma)})
            images[sigma] = pi
        if set(images) != set(avoiders(n, [(2, 1, 3)])):
            return _fail(ctx.scope(SCAN_MAX_N), {"n": n, "image_size": len(images)})
    return _pass(ctx.scope(SCAN_MAX_N))


@register_check("upsilon_sort_depth")
def _check_upsilon_depth(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(SCAN_MAX_N):
        for pi, trace in ctx.traces(n):
            a, b = pc.sort_depth(pi), pc.sort_depth(trace.output)
            if a != b:
                return _fail(ctx.scope(SCAN_MAX_N), {"perm": str(pi), "image": str(trace.output),
                                                     "depth": a, "image_depth": b})
    return _pass(ctx.scope(SCAN_MAX_N))


@register_check("upsilon_roundtrip")
def _check_upsilon_roundtrip(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(SCAN_MAX_N):
        for pi, trace in ctx.traces(n):
            try:
                back = ctx.pipeline.inverse(trace.output)
            except ValueError as exc:
                return _fail(ctx.scope(SCAN_MAX_N), {"perm": str(pi), "error": str(exc)})
            if back != pi:
                return _fail(ctx.scope(SCAN_MAX_N), {"perm": str(pi), "image": str(trace.output),
                                                     "back": str(back)})
    return _pass(ctx.scope(SCAN_MAX_N))


@register_check("transport_fix_drop")
def _check_transport_fix_drop(ctx: VerifyContext) -> Outcome:
    """(fix, drop) of the input equals (bad, des) of the image, and the distributions agree per t."""
    for n in ctx.ns(SCAN_MAX_N):
        for pi, trace in ctx.traces(n):
            left = (pc.fix(pi), pc.drop(pi))
            right = (pc.bad(trace.output), pc.des(trace.output))
            if left != right:
                return _fail(ctx.scope(SCAN_MAX_N), {"perm": str(pi), "image": str(trace.output),
                                                     "fix_drop": list(left), "bad_des": list(right)})
        side321 = [(pc.sort_depth(p), pc.fix(p), pc.drop(p)) for p in avoiders(n, [(3, 2, 1)])]
        side213 = [(pc.sort_depth(p), pc.bad(p), pc.des(p)) for p in avoiders(n, [(2, 1, 3)])]
        for t in ctx.ts(n):
            a = Counter(s[1:] for s in side321 if s[0] <= t)
            b = Counter(s[1:] for s in side213 if s[0] <= t)
            if a != b:
                return _fail(ctx.scope(SCAN_MAX_N), {"n": n, "t": t})
    return _pass(ctx.scope(SCAN_MAX_N, "pointwise and per t"))


@register_check("transport_pone_prmi_inv")
def _check_transport_triple(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(SCAN_MAX_N):
        for pi, trace in ctx.traces(n):
            left = (pc.pone(pi), pc.prmi(pi), pc.inv(pi))
            right = (pc.rrmi(trace.output), pc.rmi(trace.output), pc.rcinv(trace.output))
            if left != right:
                return _fail(ctx.scope(SCAN_MAX_N), {"perm": str(pi), "image": str(trace.output),
                                                     "pone_prmi_inv": list(left),
                                                     "rrmi_rmi_rcinv": list(right)})
    return _pass(ctx.scope(SCAN_MAX_N, "prmi read literally"))


@register_check("prmi_positional_reading", asserted=False)
def _report_prmi_positional(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(SCAN_MAX_N):
        for pi, trace in ctx.traces(n):
            if pc.prmi_positional(pi) != pc.rmi(trace.output):
                return _pass(ctx.scope(SCAN_MAX_N), transported=False, first_mismatch={
                    "perm": str(pi), "prmi_positional": pc.prmi_positional(pi),
                    "rmi_image": pc.rmi(trace.output)})
    return _pass(ctx.scope(SCAN_MAX_N), transported=True)


@register_check("trace_invariants")
def _check_trace(ctx: VerifyContext) -> Outcome:
    """Width = depth = llp + 1 = lrrp + 1; fix = diagonal corners; prmi = returns."""
    for n in ctx.ns(SCAN_MAX_N):
        for pi, trace in ctx.traces(n):
            widths = trace.widths()
            bare_arm = sum(1 for node in cs.right_arm(trace.shape) if node.left is None)
            ok = (len(set(widths)) == 1 and pc.fix(pi) == trace.dyck.diagonal_corners == bare_arm
                  and pc.prmi(pi) == trace.dyck.returns)
            if not ok:
                return _fail(ctx.scope(SCAN_MAX_N), {"perm": str(pi), "widths": list(widths),
                                                     "fix": pc.fix(pi), "bare_arm": bare_arm})
    return _pass(ctx.scope(SCAN_MAX_N))


@register_check("sortable_213_by_pattern")
def _check_sortable_213_by_pattern(ctx: VerifyContext) -> Outcome:
    """S_n^t(213) = S_n(213, 23...(t+2)1) as sets."""
    for n in ctx.ns():
        side = avoiders(n, [(2, 1, 3)])
        depths = {p: pc.sort_depth(p) for p in side}
        for t in ctx.ts(n, start=1):
            sortable = {p for p in side if depths[p] <= t}
            by_pattern = set(avoiders(n, [(2, 1, 3), pc.long_cycle_pattern(t).values]))
            if sortable != by_pattern:
                diff = sorted(sortable ^ by_pattern)[0]
                return _fail(ctx.scope(), {"n": n, "t": t, "perm": str(diff)})
    return _pass(ctx.scope(extra="213 reading"))


@register_check("sortable_213_by_pattern_231_reading", asserted=False)
def _report_sortable_213_231_reading(ctx: VerifyContext) -> Outcome:
    rows = []
    for n in ctx.ns(PAIR_SCAN_MAX_N):
        depths = Counter(pc.sort_depth(p) for p in avoiders(n, [(2, 1, 3)]))
        for t in ctx.ts(n, start=1):
            sortable = sum(c for d, c in depths.items() if d <= t)
            forced = len(avoiders(n, [(2, 1, 3), pc.long_cycle_pattern(t).values]))
            literal = len(avoiders(n, [(2, 3, 1), pc.long_cycle_pattern(t).values]))
            rows.append({"n": n, "t": t, "sortable_213": sortable, "reading_213": forced,
                         "reading_231": literal, "discrepancy": literal != sortable})
    flagged = [r for r in rows if r["discrepancy"]]
    return _pass(ctx.scope(PAIR_SCAN_MAX_N), rows=rows,
                 literal_fails_at_t1=any(r["t"] == 1 for r in flagged))


@register_check("increasing_pattern_correspondence")
def _check_increasing_correspondence(ctx: VerifyContext) -> Outcome:
    """
    r o c, the 213 tree map and Upsilon tie S_n(132, 12...(t+2)) to both
    sortable classes.
    """
    for n in ctx.ns(SCAN_MAX_N):
        for t in ctx.ts(n, start=1):
            inc = pc.increasing_pattern(t + 2).values
            cyc = pc.long_cycle_pattern(t).values
            source = avoiders(n, [(2, 1, 3), cyc])
            target = set(avoiders(n, [(2, 1, 3), inc]))
            image = set()
            for sigma in source:
                tau_ = up.conj2_bijection(sigma)
                shape = cs.shape_of(cs.lambda_map(sigma))
                if cs.lrp(cs.beta(cs.gamma(shape))) != cs.lrrp(shape):
                    return _fail(ctx.scope(SCAN_MAX_N), {"perm": str(sigma), "t": t})
                image.add(tau_)
            if image != target or len(image) != len(source):
                return _fail(ctx.scope(SCAN_MAX_N), {"n": n, "t": t, "source": len(source),
                                                     "image": len(image), "target": len(target)})
            c132 = avoiders(n, [(1, 3, 2), inc])
            rc = {up.reverse_complement(p) for p in c132}
            if rc != target:
                return _fail(ctx.scope(SCAN_MAX_N), {"n": n, "t": t, "reverse_complement": len(rc)})
            sortable_321 = set()
            for p in c132:
                sigma, pi = up.from_132_class(p)
                if pc.sort_depth(sigma) > t or pc.sort_depth(pi) > t:
                    return _fail(ctx.scope(SCAN_MAX_N), {"perm": str(p), "t": t,
                                                         "sigma": str(sigma), "pi": str(pi)})
                sortable_321.add(pi)
            expected = sum(1 for p in avoiders(n, [(3, 2, 1)]) if pc.sort_depth(p) <= t)
            if len(sortable_321) != expected:
                return _fail(ctx.scope(SCAN_MAX_N), {"n": n, "t": t, "image": len(sortable_321),
                                                     "sortable_321": expected})
    return _pass(ctx.scope(SCAN_MAX_N, "t>=1"))


@register_check("increasing_pattern_correspondence_321", asserted=False)
def _report_increasing_correspondence_321(ctx: VerifyContext) -> Outcome:
    rows = []
    for n in ctx.ns(PAIR_SCAN_MAX_N):
        for t in ctx.ts(n, start=1):
            inc = pc.increasing_pattern(t + 2).values
            cyc = pc.long_cycle_pattern(t).values
            image = {up.conj2_shape_map(p) for p in avoiders(n, [(3, 2, 1), cyc])}
            target = set(avoiders(n, [(3, 2, 1), inc]))
            rows.append({"n": n, "t": t, "bijective_onto": image == target})
    return _pass(ctx.scope(PAIR_SCAN_MAX_N, "321 reading"), rows=rows,
                 holds=all(r["bijective_onto"] for r in rows))


@register_check("pattern_class_counts")
def _check_pattern_class_counts(ctx: VerifyContext) -> Outcome:
    for n in ctx.ns(SCAN_MAX_N):
        for t in ctx.ts(n, start=1):
            cyc = pc.long_cycle_pattern(t).values
            inc = pc.increasing_pattern(t + 2).values
            counts = (len(avoiders(n, [(3, 2, 1), cyc])), len(avoiders(n, [(2, 1, 3), cyc])),
                      len(avoiders(n, [(2, 1, 3), inc])))
            if len(set(counts)) != 1:
                return _fail(ctx.scope(SCAN_MAX_N), {"n": n, "t": t, "counts": list(counts)})
    return _pass(ctx.scope(SCAN_MAX_N, "213 reading"))


@register_check("pattern_class_counts_231_reading", asserted=False)
def _report_pattern_class_counts_231(ctx: VerifyContext) -> Outcome:
    rows = []
    for n in ctx.ns(PAIR_SCAN_MAX_N):
        for t in ctx.ts(n, start=1):
            cyc = pc.long_cycle_pattern(t).values
            inc = pc.increasing_pattern(t + 2).values
            rows.append({"n": n, "t": t,
                         "321_cycle": len(avoiders(n, [(3, 2, 1), cyc])),
                         "231_cycle": len(avoiders(n, [(2, 3, 1), cyc])),
                         "231_increasing": len(avoiders(n, [(2, 3, 1), inc]))})
    return _pass(ctx.scope(PAIR_SCAN_MAX_N, "231 reading"), rows=rows)


@register_check("table_determinism")
def _check_determinism(ctx: VerifyContext) -> Outcome:
    n = min(ctx.n_max, 6)
    stats = ("fix", "drop", "des")
    serial = count_table([n], [0, 1, 2], statistics=stats, jobs=1).rows
    parallel = count_table([n], [0, 1, 2], statistics=stats, jobs=max(ctx.jobs, 2)).rows
    if serial != parallel:
        return _fail(f"n={n}", {"n": n, "serial_rows": len(serial), "parallel_rows": len(parallel)})
    return _pass(f"n={n}, jobs 1 vs {max(ctx.jobs, 2)}")


@register_check("worked_examples")
def _check_worked_examples(ctx: VerifyContext) -> Outcome:
    """Known trees and words the pipeline must reproduce exactly."""
    failures = []

    natural_tree = cs.lambda_map(Permutation([14, 7, 13, 9, 11, 12, 10, 8, 1, 5, 6, 2, 3, 4]))
    if cs.lrrp(natural_tree) != 4 or not cs.is_naturally_labeled(natural_tree):
        failures.append("lambda tree lrrp")

    pi = Permutation([3, 4, 1, 6, 8, 2, 5, 7, 9, 12, 10, 11])
    trace = ctx.pipeline.trace(pi)
    if trace.dyck.n_step_columns != (3, 6, 6, 6, 7, 7, 8, 8, 9, 11, 12, 12):
        failures.append("rho columns")
    if str(trace.plane) != "(((()((()))())())()(()()))":
        failures.append("plane tree")
    if cs.llp(trace.shape) != 4 or cs.lrrp(trace.gamma_shape) != 4:
        failures.append("phi/gamma path lengths")
    if trace.output != Permutation([12, 6, 11, 8, 9, 10, 7, 1, 2, 5, 4, 3]):
        failures.append("upsilon image")

    phi_tree_word = Permutation([14, 5, 13, 7, 10, 12, 9, 6, 1, 3, 4, 2, 8, 11])
    phi_tree = cs.lambda_map(phi_tree_word)
    moved = sd.phi_v(phi_tree, 6)
    if [n.label for n in cs.right_arm(moved)] != [1, 2, 6, 8, 11]:
        failures.append("phi_6 arm")
    if cs.in_order(sd.Phi(phi_tree)) != (5, 7, 10, 1, 3, 2, 4, 6, 8, 9, 11, 12, 13, 14):
        failures.append("Phi word")

    chain_tree = cs.lambda_map(Permutation([2, 4, 5, 1, 7, 8, 9, 3, 6, 10, 12, 11, 14, 16, 13, 15]))
    if cs.serialize_tree(sd.Theta(chain_tree)) != THETA_WORKED_TREE:
        failures.append("Theta tree")
    if [(v, case) for v, case, _ in sd.theta_steps(chain_tree)] != [(5, "b"), (9, "a"), (12, "a"), (16, "c")]:
        failures.append("theta cases")
    if sd.Phi(phi_tree) != cs.lambda_map(pc.stack_sort(phi_tree_word)):
        failures.append("Phi tree")
    if (sd.g_v(chain_tree, 1), sd.g_v(chain_tree, 3)) != (3, 5):
        failures.append("g values")

    if failures:
        return _fail("fixed examples", {"failed": failures})
    return _pass("fixed examples")


def _run_check(definition: CheckDef, ctx: VerifyContext) -> CheckResult:
    start = time.perf_counter()
    try:
        outcome = definition.fn(ctx)
    except Exception as exc:
        logger.error(f"Check {definition.name} raised: {exc}")
        outcome = Outcome(False, "error", {"error": f"{type(exc).__name__}: {exc}"}, {})
    elapsed = time.perf_counter() - start
    result = CheckResult(
        name=definition.name,
        scope=outcome.scope,
        passed=outcome.passed,
        asserted=definition.asserted,
        counterexample=outcome.counterexample,
        details=dict(outcome.details),
        seconds=round(elapsed, 4),
    )
    level = "passed" if result.passed else "FAILED"
    logger.info(f"check {result.name} {level} ({result.scope}) in {elapsed:.2f}s")
    return result


def check_names() -> List[str]:
    return [c.name for c in CHECKS]


def verify_suite(n_max: int = 6, t_max: Optional[int] = None, jobs: int = 1,
                 tree_n_max: Optional[int] = None,
                 pipeline: Optional[up.UpsilonPipeline] = None,
                 only: Optional[Sequence[str]] = None,
                 progress: bool = False) -> VerifyReport:
    """
    Run every registered check and collect the results.

    Args:
        n_max: Largest length for permutation-indexed checks (at most 10;
               full scans of S_n stop at 9, pairwise tree scans at 8)
        t_max: Largest sortability bound examined (default n - 1)
        jobs: Worker processes for the full scans
        tree_n_max: Largest size for doubly exhaustive tree checks (at most 8)
        pipeline: Upsilon implementation under test
        only: Restrict to these check names
        progress: Show progress bars

    Returns:
        VerifyReport; failures are recorded in it, never raised
    """
    _check_n(n_max, VERIFY_MAX_N)
    if n_max < 1:
        raise EnumerationLimitError("n_max must be at least 1")
    tree_cap = min(n_max, TREE_MAX_N) if tree_n_max is None else tree_n_max
    _check_n(tree_cap, TREE_MAX_N)
    pipeline = pipeline or up.DEFAULT_PIPELINE
    if only:
        unknown = set(only) - set(check_names())
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(sorted(unknown))}")

    ctx = VerifyContext(n_max, t_max, tree_cap, jobs, pipeline, progress)
    logger.info(f"verify_suite n_max={n_max} t_max={t_max} tree_n_max={tree_cap} jobs={jobs} "
                f"pipeline={pipeline.name}")
    selected = [c for c in CHECKS if not only or c.name in only]
    results = [_run_check(c, ctx) for c in selected]
    return VerifyReport(
        n_max=n_max,
        t_max=t_max,
        tree_n_max=tree_cap,
        jobs=jobs,
        pipeline=pipeline.name,
        generated_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        checks=results,
    )
