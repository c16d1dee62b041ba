"""
Permutations in one-line notation, pattern containment, the stack-sorting
operator and the permutation statistics used throughout the package.

Positions are 1-based everywhere a position is reported to the caller.
"""

import re
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict

from stacksort_bijection.core.errors import (
    PatternWitnessError,
    PermutationError,
    PermutationParseError,
)
from stacksort_bijection.utils.logger import get_logger

logger = get_logger(__name__)

PermLike = Union["Permutation", Sequence[int]]


class Permutation:
    """
    Immutable permutation of [n] in one-line notation.

    values[i - 1] is the image pi_i. Permutations hash and compare by their
    values; ordering is lexicographic so sorted() lists them the way the
    enumerators produce them.
    """

    __slots__ = ("_values",)

    def __init__(self, values: Iterable[int] = (), check: bool = True):
        """
        values -- one-line notation pi_1 ... pi_n.
        check -- verify that values is a rearrangement of 1..n. Hot loops that
                 build permutations from other permutations pass False.
        """
        self._values: Tuple[int, ...] = tuple(values)
        if check:
            n = len(self._values)
            seen = set()
            for v in self._values:
                if not isinstance(v, int) or isinstance(v, bool):
                    raise PermutationError(f"Permutation entry {v!r} is not an integer")
                if v < 1 or v > n:
                    raise PermutationError(f"value {v} out of range [1, {n}]")
                if v in seen:
                    raise PermutationError(f"duplicate value {v}")
                seen.add(v)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1), check=False)

    @property
    def values(self) -> Tuple[int, ...]:
        return self._values

    @property
    def n(self) -> int:
        return len(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __iter__(self) -> Iterator[int]:
        return iter(self._values)

    def __getitem__(self, idx):
        return self._values[idx]

    def __eq__(self, other) -> bool:
        if isinstance(other, Permutation):
            return self._values == other._values
        if isinstance(other, tuple):
            return self._values == other
        return NotImplemented

    def __lt__(self, other: "Permutation") -> bool:
        return self._values < other._values

    def __hash__(self) -> int:
        return hash(self._values)

    def __str__(self) -> str:
        return " ".join(str(v) for v in self._values)

    def __repr__(self) -> str:
        return f"Permutation('{self}')"

    def compact(self) -> str:
        """Digit string form (only unambiguous when n <= 9)."""
        if self.n > 9:
            return str(self)
        return "".join(str(v) for v in self._values)

    def at(self, i: int) -> int:
        """pi_i with 1-based i."""
        return self._values[i - 1]

    def position(self, value: int) -> int:
        """1-based position of value."""
        return self._values.index(value) + 1

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self._values, start=1):
            inv[v - 1] = i
        return Permutation(inv, check=False)

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self._values, start=1))


class StatRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    des: int
    fix: int
    drop: int
    exc: int
    inv: int
    bad: int
    pone: int
    rmi_count: int
    rma_count: int
    dt_set: List[int]
    rmi_set: List[int]
    rma_set: List[int]
    tail_start: int


class RefinedStatRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    prmi: int
    rrmi: int
    rcinv: int
    mlw: int
    lw: Dict[int, int]


def as_perm(perm: PermLike) -> Permutation:
    if isinstance(perm, Permutation):
        return perm
    return Permutation(perm)


# ---------------------------------------------------------------- parsing

_DIGITS = re.compile(r"^\d+$")


def parse_permutation(text: str) -> Permutation:
    """
    Parse a permutation from text.

    Accepts whitespace- or comma-separated decimal values, or a compact digit
    string such as "2413" when every value is a single digit.

    Args:
        text: Raw text

    Returns:
        Validated Permutation

    Raises:
        PermutationParseError: naming the offending token
    """
    stripped = text.strip()
    if not stripped:
        return Permutation(())

    tokens: List[str] = []
    for piece in stripped.split(","):
        parts = piece.split()
        if not parts:
            raise PermutationParseError(f"empty token in {text.strip()!r}", token="")
        tokens.extend(parts)

    if len(tokens) == 1 and len(tokens[0]) > 1 and _DIGITS.match(tokens[0]):
        tokens = list(tokens[0])

    n = len(tokens)
    values: List[int] = []
    seen = set()
    for token in tokens:
        if not _DIGITS.match(token):
            raise PermutationParseError(f"invalid token {token!r}", token=token)
        value = int(token)
        if value < 1 or value > n:
            raise PermutationParseError(
                f"value {value} out of range [1, {n}]", token=token)
        if value in seen:
            raise PermutationParseError(f"duplicate value {value}", token=token)
        seen.add(value)
        values.append(value)
    return Permutation(values, check=False)


def standardize(word: Sequence[int]) -> Permutation:
    """Replace the i-th smallest letter of a word of distinct integers by i."""
    rank = {v: i for i, v in enumerate(sorted(word), start=1)}
    if len(rank) != len(word):
        raise PermutationError(f"word {list(word)} has repeated letters")
    return Permutation([rank[v] for v in word], check=False)


# ---------------------------------------------------------------- patterns

def increasing_pattern(k: int) -> Permutation:
    """12...k"""
    return Permutation.identity(k)


def long_cycle_pattern(t: int) -> Permutation:
    """23...(t+2)1, the pattern characterizing t-stack-sortable 213/321 avoiders."""
    return Permutation(list(range(2, t + 3)) + [1], check=False)


def find_occurrence(perm: PermLike, pattern: PermLike) -> Optional[Tuple[int, ...]]:
    """
    Search for an occurrence of pattern in perm.

    Backtracking over index subsequences; a branch is cut as soon as the
    chosen prefix stops being order-isomorphic to the pattern prefix or too
    few positions remain.

    Returns:
        1-based positions of the first occurrence found, or None
    """
    w = tuple(perm)
    p = tuple(pattern)
    n, k = len(w), len(p)
    if k == 0:
        return ()
    if k > n:
        return None

    chosen: List[int] = []

    def extend(start: int, j: int) -> bool:
        if j == k:
            return True
        pj = p[j]
        for i in range(start, n - (k - j) + 1):
            v = w[i]
            ok = True
            for l in range(j):
                if (p[l] < pj) != (w[chosen[l]] < v):
                    ok = False
                    break
            if not ok:
                continue
            chosen.append(i)
            if extend(i + 1, j + 1):
                return True
            chosen.pop()
        return False

    if extend(0, 0):
        return tuple(i + 1 for i in chosen)
    return None


def contains(perm: PermLike, pattern: PermLike) -> bool:
    return find_occurrence(perm, pattern) is not None


def contains_naive(perm: PermLike, pattern: PermLike) -> bool:
    """Reference containment test over all index subsequences."""
    w = tuple(perm)
    p = tuple(pattern)
    if len(p) > len(w):
        return False
    target = standardize(p).values if p else ()
    for idx in combinations(range(len(w)), len(p)):
        if standardize([w[i] for i in idx]).values == target:
            return True
    return False


def avoids(perm: PermLike, pattern: PermLike) -> bool:
    return find_occurrence(perm, pattern) is None


def avoids_all(perm: PermLike, patterns: Iterable[PermLike]) -> bool:
    return all(find_occurrence(perm, p) is None for p in patterns)


def require_avoids(perm: PermLike, pattern: PermLike) -> None:
    """Raise PatternWitnessError carrying the occurrence when perm contains pattern."""
    positions = find_occurrence(perm, pattern)
    if positions is not None:
        w = tuple(perm)
        logger.debug(f"{list(w)} contains {list(pattern)} at {positions}")
        raise PatternWitnessError(tuple(pattern), positions, [w[i - 1] for i in positions])


# ---------------------------------------------------------------- stack sorting

def _stack_sort_word(w: Tuple[int, ...]) -> Tuple[int, ...]:
    # work items are segments still to sort or letters ready to emit
    out: List[int] = []
    work: List[Union[int, Tuple[int, ...]]] = [w]
    while work:
        item = work.pop()
        if isinstance(item, int):
            out.append(item)
            continue
        if len(item) <= 1:
            out.extend(item)
            continue
        m = max(item)
        i = item.index(m)
        work.extend((m, item[i + 1:], item[:i]))
    return tuple(out)


def stack_sort(perm: PermLike) -> Permutation:
    """S(pi) = S(left of n) S(right of n) n, with S of the empty word empty."""
    return Permutation(_stack_sort_word(tuple(perm)), check=False)


def stack_sort_west(perm: PermLike) -> Permutation:
    """
    Pass the word through a single stack: before pushing a letter, pop
    every smaller letter from the top; empty the stack at the end.
    """
    stack: List[int] = []
    out: List[int] = []
    for v in perm:
        while stack and stack[-1] < v:
            out.append(stack.pop())
        stack.append(v)
    while stack:
        out.append(stack.pop())
    return Permutation(out, check=False)


def descent_tops(perm: PermLike) -> List[int]:
    """Descent tops in increasing order."""
    w = tuple(perm)
    return sorted(w[i] for i in range(len(w) - 1) if w[i] > w[i + 1])


def relocate(word: Sequence[int], b: int) -> Tuple[int, ...]:
    """
    Move letter b to just before the first larger letter to its right, or to
    the end when no such letter exists.
    """
    w = list(word)
    i = w.index(b)
    del w[i]
    for j in range(i, len(w)):
        if w[j] > b:
            w.insert(j, b)
            return tuple(w)
    w.append(b)
    return tuple(w)


def relocation_steps(perm: PermLike) -> List[Tuple[int, Permutation]]:
    """
    Intermediate words of the relocation description of S.

    Returns:
        One (descent top, word after relocating it) pair per descent top of
        the input, in increasing order of the descent tops
    """
    word = tuple(perm)
    steps = []
    for b in descent_tops(word):
        word = relocate(word, b)
        steps.append((b, Permutation(word, check=False)))
    return steps


def stack_sort_dynamic(perm: PermLike) -> Permutation:
    word = tuple(perm)
    for b in descent_tops(word):
        word = relocate(word, b)
    return Permutation(word, check=False)


def sort_iterates(perm: PermLike) -> List[Permutation]:
    """pi, S(pi), S^2(pi), ... up to and including the first identity."""
    current = as_perm(perm)
    iterates = [current]
    while not current.is_identity():
        current = stack_sort(current)
        iterates.append(current)
    return iterates


def sort_depth(perm: PermLike) -> int:
    """Smallest t with S^t(pi) the identity."""
    word = tuple(perm)
    ident = tuple(range(1, len(word) + 1))
    t = 0
    while word != ident:
        word = _stack_sort_word(word)
        t += 1
    return t


def is_t_stack_sortable(perm: PermLike, t: int) -> bool:
    return sort_depth(perm) <= t


# ---------------------------------------------------------------- statistics

def right_to_left_minima(perm: PermLike) -> List[Tuple[int, int]]:
    """(position, value) of every right-to-left minimum, left to right."""
    w = tuple(perm)
    out = []
    current = None
    for i in range(len(w) - 1, -1, -1):
        if current is None or w[i] < current:
            current = w[i]
            out.append((i + 1, w[i]))
    out.reverse()
    return out


def right_to_left_maxima(perm: PermLike) -> List[Tuple[int, int]]:
    w = tuple(perm)
    out = []
    current = None
    for i in range(len(w) - 1, -1, -1):
        if current is None or w[i] > current:
            current = w[i]
            out.append((i + 1, w[i]))
    out.reverse()
    return out


def des(perm: PermLike) -> int:
    w = tuple(perm)
    return sum(1 for i in range(len(w) - 1) if w[i] > w[i + 1])


def fix(perm: PermLike) -> int:
    return sum(1 for i, v in enumerate(perm, start=1) if v == i)


def drop(perm: PermLike) -> int:
    return sum(1 for i, v in enumerate(perm, start=1) if v < i)


def exc(perm: PermLike) -> int:
    return sum(1 for i, v in enumerate(perm, start=1) if v > i)


def inv(perm: PermLike) -> int:
    w = tuple(perm)
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def bad(perm: PermLike) -> int:
    """Right-to-left minima that start the word or follow a smaller letter."""
    w = tuple(perm)
    return sum(1 for i, v in right_to_left_minima(w) if i == 1 or w[i - 2] < v)


def pone(perm: PermLike) -> int:
    w = tuple(perm)
    return w.index(1) + 1 if w else 0


def rmi(perm: PermLike) -> int:
    return len(right_to_left_minima(perm))


def rma(perm: PermLike) -> int:
    return len(right_to_left_maxima(perm))


def tail_start(perm: PermLike) -> int:
    """1-based index where the longest increasing run ending at pi_n starts (0 when empty)."""
    w = tuple(perm)
    if not w:
        return 0
    i = len(w) - 1
    while i > 0 and w[i - 1] < w[i]:
        i -= 1
    return i + 1


def tail(perm: PermLike) -> Tuple[int, ...]:
    w = tuple(perm)
    if not w:
        return ()
    return w[tail_start(w) - 1:]


def lw_values(perm: PermLike) -> Dict[int, int]:
    """lw_j = j - pi_j for every right-to-left-minimum position j."""
    return {j: j - v for j, v in right_to_left_minima(perm)}


def mlw(perm: PermLike) -> int:
    return max(lw_values(perm).values(), default=0)


def prmi(perm: PermLike) -> int:
    """
    Prime right-to-left minima: with the minima a_1 < ... < a_m sitting at
    positions i_1 < ... < i_m, a_k is prime when k = 1 or a_k - 1 = i_{k-1}.
    """
    minima = right_to_left_minima(perm)
    count = 0
    for k, (_, value) in enumerate(minima):
        if k == 0 or value - 1 == minima[k - 1][0]:
            count += 1
    return count


def prmi_positional(perm: PermLike) -> int:
    """Alternative reading of primality: i_k = i_{k-1} + 1."""
    minima = right_to_left_minima(perm)
    count = 0
    for k, (pos, _) in enumerate(minima):
        if k == 0 or pos == minima[k - 1][0] + 1:
            count += 1
    return count


def rrmi(perm: PermLike) -> int:
    """Positions i <= pone with pi_i below every letter strictly between i and pone."""
    w = tuple(perm)
    if not w:
        return 0
    p = pone(w)
    count = 0
    floor = None
    for i in range(p, 0, -1):
        v = w[i - 1]
        if floor is None or v < floor:
            count += 1
        if i < p:
            floor = v if floor is None else min(floor, v)
    return count


def rcinv(perm: PermLike) -> int:
    """
    Restricted coinversions: pairs i <= j with pi_i <= pi_j, pi_j a descent
    top, both inside one gap (i_{k-1}, i_k) between consecutive
    right-to-left-minimum positions (i_0 = 0).
    """
    w = tuple(perm)
    n = len(w)
    tops = {i for i in range(n - 1) if w[i] > w[i + 1]}
    count = 0
    left = 0
    for pos, _ in right_to_left_minima(w):
        segment = range(left, pos - 1)
        for j in segment:
            if j not in tops:
                continue
            for i in range(left, j + 1):
                if w[i] <= w[j]:
                    count += 1
        left = pos
    return count


def classic_stats(perm: PermLike) -> StatRecord:
    w = tuple(perm)
    minima = right_to_left_minima(w)
    maxima = right_to_left_maxima(w)
    tops = descent_tops(w)
    return StatRecord(
        n=len(w),
        des=len(tops),
        fix=fix(w),
        drop=drop(w),
        exc=exc(w),
        inv=inv(w),
        bad=bad(w),
        pone=pone(w),
        rmi_count=len(minima),
        rma_count=len(maxima),
        dt_set=tops,
        rmi_set=[v for _, v in minima],
        rma_set=[v for _, v in maxima],
        tail_start=tail_start(w),
    )


def refined_stats(perm: PermLike) -> RefinedStatRecord:
    w = tuple(perm)
    return RefinedStatRecord(
        prmi=prmi(w),
        rrmi=rrmi(w),
        rcinv=rcinv(w),
        mlw=mlw(w),
        lw=lw_values(w),
    )


STAT_FUNCTIONS = {
    "des": des,
    "fix": fix,
    "drop": drop,
    "exc": exc,
    "inv": inv,
    "bad": bad,
    "pone": pone,
    "rmi": rmi,
    "rma": rma,
    "prmi": prmi,
    "rrmi": rrmi,
    "rcinv": rcinv,
    "mlw": mlw,
    "sort_depth": sort_depth,
}


def stats_summary(perm: PermLike) -> Dict[str, int]:
    """Flat snake_case statistics object used by the `stats` command and the API."""
    w = tuple(perm)
    return {name: fn(w) for name, fn in STAT_FUNCTIONS.items()}


# ---------------------------------------------------------------- 321-avoiders

def canonical_decomposition(perm: PermLike) -> List[Tuple[Tuple[int, ...], int]]:
    """
    Split a 321-avoider as I_1 a_1 I_2 a_2 ... I_l a_l where the a_k are
    the right-to-left minima and the blocks I_k concatenate to an
    increasing word.

    Raises:
        PatternWitnessError: when the input contains 321
    """
    w = tuple(perm)
    require_avoids(w, (3, 2, 1))
    parts = []
    left = 0
    for pos, value in right_to_left_minima(w):
        parts.append((w[left:pos - 1], value))
        left = pos
    return parts


def weak_excedance_split(perm: PermLike) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """(letters with pi_i >= i, remaining letters), both in positional order."""
    upper, lower = [], []
    for i, v in enumerate(perm, start=1):
        (upper if v >= i else lower).append(v)
    return tuple(upper), tuple(lower)


def is_321_avoiding_by_split(perm: PermLike) -> bool:
    upper, lower = weak_excedance_split(perm)
    return all(a < b for a, b in zip(upper, upper[1:])) and \
        all(a < b for a, b in zip(lower, lower[1:]))


# ---------------------------------------------------------------- symmetries

def reverse(perm: PermLike) -> Permutation:
    return Permutation(tuple(perm)[::-1], check=False)


def complement(perm: PermLike) -> Permutation:
    w = tuple(perm)
    n = len(w)
    return Permutation((n + 1 - v for v in w), check=False)
