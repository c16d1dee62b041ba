"""
Exception types raised by the core modules.

All of them derive from ValueError so callers that only care about bad
input can catch that.
"""

from typing import Optional, Sequence, Tuple


class PermutationError(ValueError):
    """Values do not form a permutation of [n]."""


class PermutationParseError(PermutationError):
    def __init__(self, message: str, token: Optional[str] = None):
        super().__init__(message)
        self.token = token


class PatternWitnessError(ValueError):
    """Input contains a pattern it was required to avoid."""

    def __init__(self, pattern: Sequence[int], positions: Sequence[int],
                 values: Sequence[int]):
        self.pattern: Tuple[int, ...] = tuple(pattern)
        self.positions: Tuple[int, ...] = tuple(positions)
        self.values: Tuple[int, ...] = tuple(values)
        pattern_str = "".join(str(x) for x in self.pattern) if len(self.pattern) < 10 \
            else " ".join(str(x) for x in self.pattern)
        super().__init__(
            f"contains {pattern_str}: values {' '.join(map(str, self.values))} "
            f"at positions {', '.join(map(str, self.positions))}"
        )

    @property
    def witness(self) -> dict:
        return {"pattern": list(self.pattern), "positions": list(self.positions),
                "values": list(self.values)}


class TreeError(ValueError):
    """Malformed tree, path or serialization, or an operation outside its domain."""


class EnumerationLimitError(ValueError):
    """Requested size is outside what the enumerators support."""
