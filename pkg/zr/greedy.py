"""Single-point attack and the iterative greedy multi-point attack."""

import logging
from bisect import insort
from collections.abc import Sequence
from itertools import accumulate

from zr.keys import KeySet
from zr.report import AttackMethod, AttackReport, PoisonSet
from zr.stats import SummaryStats, stats_of

logger = logging.getLogger(__name__)


def adjacent_candidates(values: Sequence[int]) -> list[int]:
    """Integers next to a stored value that are free and strictly inside the range.

    ``values`` must be sorted and distinct.
    """
    present = set(values)
    candidates = {v + 1 for v in values[:-1]} | {v - 1 for v in values[1:]}
    return sorted(candidates - present)


def _best_single(values: Sequence[int]) -> tuple[int, float, float] | None:
    """Return ``(poison, loss, base_loss)`` of the best adjacent candidate.

    One pass over the candidates in ascending order; the rank shift caused by
    an insertion is the suffix sum of the keys above it.
    """
    candidates = adjacent_candidates(values)
    if not candidates:
        return None

    base = stats_of(values)
    origin = base.origin
    shifted = [v - origin for v in values]
    suffix = list(accumulate(reversed(shifted), initial=0))[::-1]

    best_p, best_loss = candidates[0], float("-inf")
    below = 0
    for p in candidates:
        x = p - origin
        while below < len(shifted) and shifted[below] < x:
            below += 1
        loss = SummaryStats(
            m=base.m + 1,
            sum_x=base.sum_x + x,
            sum_x2=base.sum_x2 + x * x,
            sum_xr=base.sum_xr + suffix[below] + x * (below + 1),
            origin=origin,
        ).mse()
        if loss > best_loss:
            best_p, best_loss = p, loss
    return best_p, best_loss, base.mse()


def single_point_attack(keys: KeySet) -> int | None:
    """Optimal single poison, or ``None`` when no candidate exists or none helps.

    Only integers adjacent to a key are evaluated; ties go to the smallest key.
    """
    best = _best_single(keys.keys)
    if best is None:
        return None
    poison, loss, base_loss = best
    return None if loss < base_loss else poison


def greedy_attack(keys: KeySet, lam: int) -> AttackReport:
    """Insert the best single poison ``lam`` times, treating earlier poisons as keys.

    Args:
        keys: Legitimate keys.
        lam: Poisoning budget.
    Returns:
        Report whose ``trace`` lists the poisons in insertion order together
        with the loss after each insertion.
    """
    values = list(keys.keys)
    mse_before = stats_of(values).mse()
    trace: list[tuple[int, float]] = []

    while len(trace) < lam:
        best = _best_single(values)
        if best is None or best[1] < best[2]:
            logger.info("greedy stopped early after %d of %d poisons", len(trace), lam)
            break
        poison, loss, _ = best
        insort(values, poison)
        trace.append((poison, loss))

    return AttackReport(
        method=AttackMethod.GREEDY,
        budget=lam,
        poisons=PoisonSet.of(p for p, _ in trace),
        mse_before=mse_before,
        mse_after=trace[-1][1] if trace else mse_before,
        trace=tuple(trace),
    )


def single_attack_report(keys: KeySet) -> AttackReport:
    """Wrap :func:`single_point_attack` in a report."""
    mse_before = stats_of(keys.keys).mse()
    poison = single_point_attack(keys)
    if poison is None:
        return AttackReport(AttackMethod.SINGLE, 1, PoisonSet(), mse_before, mse_before)
    mse_after = stats_of([*keys.keys, poison]).mse()
    return AttackReport(AttackMethod.SINGLE, 1, PoisonSet((poison,)), mse_before, mse_after)
