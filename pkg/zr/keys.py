from bisect import bisect_left
from collections.abc import Iterable
from dataclasses import dataclass

from zr.errors import DegenerateInput, InputError

MAX_KEY = 2**64 - 1


@dataclass(slots=True, frozen=True)
class KeySet:
    """Sorted, distinct, non-negative 64-bit legitimate keys."""

    keys: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.keys) < 2:
            raise DegenerateInput(f"a key set needs at least two keys, got {len(self.keys)}")
        if self.keys[0] < 0 or self.keys[-1] > MAX_KEY:
            raise InputError("keys must be unsigned 64-bit integers")
        if any(lo >= hi for lo, hi in zip(self.keys, self.keys[1:])):
            raise InputError("keys must be strictly increasing")

    @classmethod
    def of(cls, values: Iterable[int]) -> KeySet:
        """Build a key set from arbitrary integers, sorting and dropping duplicates."""
        return cls(tuple(sorted({int(v) for v in values})))

    @property
    def n(self) -> int:
        return len(self.keys)

    @property
    def first(self) -> int:
        return self.keys[0]

    @property
    def last(self) -> int:
        return self.keys[-1]

    def __len__(self) -> int:
        return len(self.keys)

    def __iter__(self):
        return iter(self.keys)

    def __contains__(self, value: object) -> bool:
        if not isinstance(value, int):
            return False
        pos = bisect_left(self.keys, value)
        return pos < len(self.keys) and self.keys[pos] == value

    def free_interior(self) -> int:
        """Number of integers strictly between the extremes that are not keys."""
        return self.last - self.first + 1 - self.n


@dataclass(slots=True, frozen=True)
class RankedMultiset:
    """Non-decreasing key multiset; position i carries the 1-based rank i + 1."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(lo > hi for lo, hi in zip(self.values, self.values[1:])):
            raise InputError("multiset values must be non-decreasing")
        if not self.values or self.values[0] == self.values[-1]:
            raise DegenerateInput("at least two distinct values are required")

    @classmethod
    def of(cls, values: Iterable[int]) -> RankedMultiset:
        return cls(tuple(sorted(int(v) for v in values)))

    @property
    def m(self) -> int:
        return len(self.values)
