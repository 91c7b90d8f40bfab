"""Exact optimal attacks by structured enumeration.

In the original setting every poison of an optimal attack is chained to a
legitimate key through neighbouring poisons, so it suffices to distribute the
budget over blocks attached to the right of ``k_1 .. k_{n-1}`` and to the left
of ``k_2 .. k_n`` (plus an unused share). In the relaxed setting optimal
poisons sit on the keys themselves and use the whole budget.

Both enumerations are stars-and-bars: a multiset of ``λ`` slot indices is one
composition of the budget over the slots.
"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, groupby
from math import comb

from zr.errors import SearchSpaceTooLarge
from zr.keys import KeySet
from zr.report import AttackMethod, AttackReport, PoisonCounts, PoisonSet
from zr.stats import build_prefix_sums, merged_stats

logger = logging.getLogger(__name__)

DEFAULT_LIMIT = 10_000_000


@dataclass(slots=True, frozen=True)
class BlockAllocation:
    """Block lengths per gap: ``right[j]`` grows up from ``k_j``, ``left[j]`` down from ``k_{j+1}``."""

    right: tuple[int, ...]
    left: tuple[int, ...]
    unused: int

    @classmethod
    def from_slots(cls, slots: Sequence[int], gaps: int) -> BlockAllocation:
        """Decode a sorted multiset of slot indices; slot ``2·gaps`` is the unused share."""
        right, left = [0] * gaps, [0] * gaps
        unused = 0
        for slot, group in groupby(slots):
            count = sum(1 for _ in group)
            if slot == 2 * gaps:
                unused = count
            elif slot % 2 == 0:
                right[slot // 2] = count
            else:
                left[slot // 2] = count
        return cls(tuple(right), tuple(left), unused)

    def poisons(self, keys: KeySet) -> tuple[int, ...] | None:
        """Materialize the blocks, or ``None`` when two blocks overlap inside a gap."""
        out: list[int] = []
        for j, (up, down) in enumerate(zip(self.right, self.left)):
            if not up and not down:
                continue
            lo, hi = keys.keys[j], keys.keys[j + 1]
            if up + down > hi - lo - 1:
                return None
            out.extend(range(lo + 1, lo + up + 1))
            out.extend(range(hi - down, hi))
        return tuple(out)


def check_limit(count: int, limit: int) -> None:
    if count > limit:
        raise SearchSpaceTooLarge(count, limit)
    logger.info("enumerating %d candidates", count)


def _allocations(keys: KeySet, lam: int) -> Iterator[tuple[int, ...]]:
    gaps = keys.n - 1
    for slots in combinations_with_replacement(range(2 * gaps + 1), lam):
        poisons = BlockAllocation.from_slots(slots, gaps).poisons(keys)
        if poisons is not None:
            yield poisons


def _best_poison_set(keys: KeySet, candidates: Iterator[tuple[int, ...]]) -> tuple[tuple[int, ...], float]:
    ps = build_prefix_sums(keys)
    best: tuple[int, ...] = ()
    best_loss = float("-inf")
    for poisons in candidates:
        loss = merged_stats(ps, poisons).mse()
        if loss > best_loss or (loss == best_loss and poisons < best):
            best, best_loss = poisons, loss
    return best, best_loss


def optimal_attack(keys: KeySet, lam: int, limit: int = DEFAULT_LIMIT) -> AttackReport:
    """Maximize the loss over all attacks of at most ``lam`` chained poisons.

    Args:
        keys: Legitimate keys.
        lam: Poisoning budget.
        limit: Largest number of block allocations the caller accepts.
    Returns:
        The best attack; ties go to the lexicographically smallest poison sequence.
    Raises:
        SearchSpaceTooLarge: If ``C(2n−2+λ, λ)`` exceeds ``limit``.
    """
    check_limit(comb(2 * keys.n - 2 + lam, lam), limit)
    mse_before = merged_stats(build_prefix_sums(keys), ()).mse()
    best, best_loss = _best_poison_set(keys, _allocations(keys, lam))
    return AttackReport(AttackMethod.OPTIMAL, lam, PoisonSet(best), mse_before, best_loss)


def optimal_attack_bruteforce(keys: KeySet, lam: int, limit: int = DEFAULT_LIMIT) -> AttackReport:
    """Exhaustive search over every subset of free interior integers of size at most ``lam``.

    Only meant as a validation oracle for small domains.
    """
    free = [x for x in range(keys.first + 1, keys.last) if x not in keys]
    sizes = range(min(lam, len(free)) + 1)
    check_limit(sum(comb(len(free), s) for s in sizes), limit)

    def subsets() -> Iterator[tuple[int, ...]]:
        for size in sizes:
            yield from combinations(free, size)

    mse_before = merged_stats(build_prefix_sums(keys), ()).mse()
    best, best_loss = _best_poison_set(keys, subsets())
    return AttackReport(AttackMethod.OPTIMAL, lam, PoisonSet(best), mse_before, best_loss)


def optimal_attack_relaxed(
    keys: KeySet,
    lam: int,
    limit: int = DEFAULT_LIMIT,
    *,
    saturate: bool = True,
) -> AttackReport:
    """Maximize ``E(K ⊎ Q_K(d))`` over multiplicity vectors ``d``.

    With ``saturate`` only vectors with ``Σ d = lam`` are visited, otherwise
    every vector with ``Σ d ≤ lam`` is.

    Raises:
        SearchSpaceTooLarge: If the number of vectors exceeds ``limit``.
    """
    n = keys.n
    slots = n if saturate else n + 1
    check_limit(comb(slots + lam - 1, lam), limit)

    ps = build_prefix_sums(keys)
    best: tuple[int, ...] = ()
    best_loss = float("-inf")
    for combo in combinations_with_replacement(range(slots), lam):
        loss = merged_stats(ps, [keys.keys[i] for i in combo if i < n]).mse()
        if loss > best_loss:
            best, best_loss = combo, loss

    counts = [0] * n
    for i in best:
        if i < n:
            counts[i] += 1
    return AttackReport(
        method=AttackMethod.OPTIMAL_RELAXED,
        budget=lam,
        poisons=PoisonCounts(tuple(counts), keys.keys),
        mse_before=ps.base_stats().mse(),
        mse_after=best_loss,
    )
