from collections.abc import Iterable
from dataclasses import asdict, dataclass, field
from enum import StrEnum

from zr.errors import InputError
from zr.keys import KeySet


class AttackMethod(StrEnum):
    SINGLE = "single"
    GREEDY = "greedy"
    SEGE_EXACT = "sege_exact"
    SEGE_HEURISTIC = "sege_heuristic"
    SEGE_RELAXED = "sege_relaxed"
    OPTIMAL = "optimal"
    OPTIMAL_RELAXED = "optimal_relaxed"


@dataclass(slots=True, frozen=True)
class PoisonSet:
    """Attack in the original setting: distinct free integers inside ``(k_1, k_n)``."""

    points: tuple[int, ...] = ()

    @classmethod
    def of(cls, points: Iterable[int]) -> PoisonSet:
        return cls(tuple(sorted(points)))

    def validate(self, keys: KeySet) -> None:
        """Raise ``InputError`` unless every point is a legal poison for ``keys``."""
        if any(lo >= hi for lo, hi in zip(self.points, self.points[1:])):
            raise InputError("poison points must be sorted and distinct")
        for p in self.points:
            if not keys.first < p < keys.last:
                raise InputError(f"poison {p} lies outside ({keys.first}, {keys.last})")
            if p in keys:
                raise InputError(f"poison {p} collides with a legitimate key")

    def __len__(self) -> int:
        return len(self.points)

    def values(self) -> list[int]:
        return list(self.points)

    def to_json(self) -> list[int]:
        return list(self.points)


@dataclass(slots=True, frozen=True)
class PoisonCounts:
    """Attack in the relaxed setting: ``d[i]`` extra copies of key ``i``."""

    d: tuple[int, ...]
    keys: tuple[int, ...] = field(repr=False, compare=False)

    def __len__(self) -> int:
        return sum(self.d)

    def values(self) -> list[int]:
        """Sorted multiset of poison values."""
        return [k for k, c in zip(self.keys, self.d) for _ in range(c)]

    def support(self) -> dict[int, int]:
        return {k: c for k, c in zip(self.keys, self.d) if c}

    def to_json(self) -> dict[str, int]:
        return {str(k): c for k, c in self.support().items()}


@dataclass(slots=True, frozen=True)
class AttackReport:
    """Outcome of one attack run.

    ``trace`` lists ``(poison, mse)`` per greedy step in insertion order;
    ``detail`` carries the Seg+E pattern when there is one.
    """

    method: AttackMethod
    budget: int
    poisons: PoisonSet | PoisonCounts
    mse_before: float
    mse_after: float
    trace: tuple[tuple[int, float], ...] = ()
    detail: object | None = None

    @property
    def ratio(self) -> float:
        """Loss amplification ``mse_after / mse_before`` (inf for a perfect fit)."""
        return self.mse_after / self.mse_before if self.mse_before > 0 else float("inf")

    def to_dict(self) -> dict:
        payload: dict = {
            "method": str(self.method),
            "budget": self.budget,
            "poisons": self.poisons.to_json(),
            "size": len(self.poisons),
            "mse_before": self.mse_before,
            "mse_after": self.mse_after,
        }
        if self.trace:
            payload["order"] = [p for p, _ in self.trace]
        if self.detail is not None:
            payload["pattern"] = asdict(self.detail)
        return payload
