"""Segment + Endpoint attacks.

A Seg+E attack places a block of poisons right after the smallest key, a
block right before the largest key, and one contiguous middle segment that
starts or ends at an interior key. In the relaxed setting the blocks collapse
to multiplicities on ``k_1``, one interior key ``k_i`` and ``k_n``.

Blocks in the original setting are summarized by their moments, so a budget
split ``(left, middle, right)`` is scored in O(1) once the block prefixes for
an anchor are known.
"""

import logging
import math
from bisect import bisect_left
from collections.abc import Sequence
from dataclasses import dataclass

from numpy.polynomial import Polynomial

from zr.errors import DegenerateInput, NoFeasiblePoison
from zr.keys import KeySet
from zr.report import AttackMethod, AttackReport, PoisonCounts, PoisonSet
from zr.stats import PrefixSums, SummaryStats, build_prefix_sums, poisoned_stats

logger = logging.getLogger(__name__)

# (anchoring key, segment extends upward)
type Anchor = tuple[int, bool]


@dataclass(slots=True, frozen=True)
class SegEOriginal:
    """Interval boundaries ``k_1 ≤ R1 < L2 ≤ R2 < L3 ≤ k_n``.

    ``R1 = k_1`` encodes an empty left block and ``L3 = k_n`` an empty right
    block. One of ``L2``/``R2`` is the anchoring key; both are ``None`` when
    there is no middle segment.
    """

    R1: int
    L2: int | None
    R2: int | None
    L3: int


@dataclass(slots=True, frozen=True)
class SegERelaxed:
    """``a`` copies of ``k_1``, ``b`` of ``k_p`` and ``c`` of ``k_n`` (``p`` is 1-based)."""

    a: int
    b: int
    c: int
    p: int


@dataclass(slots=True, frozen=True)
class _Block:
    """Moments of a sorted run of poisons, shifted by the key origin.

    ``core`` is the run's contribution to ``Σ x·r`` when no other poison
    precedes it; with ``o`` poisons in front add ``o · sx``.
    """

    points: tuple[int, ...] = ()
    sx: int = 0
    sx2: int = 0
    core: int = 0

    @property
    def lo(self) -> int:
        return self.points[0]

    @property
    def hi(self) -> int:
        return self.points[-1]


def _walk_up(keys: Sequence[int], j: int, count: int) -> list[int]:
    """Up to ``count`` free integers above ``keys[j]`` and below the largest key."""
    out: list[int] = []
    nxt = j + 1
    x = keys[j] + 1
    while len(out) < count and x < keys[-1]:
        if x == keys[nxt]:
            nxt += 1
        else:
            out.append(x)
        x += 1
    return out


def _walk_down(keys: Sequence[int], j: int, count: int) -> list[int]:
    """Up to ``count`` free integers below ``keys[j]`` and above the smallest key, descending."""
    out: list[int] = []
    prv = j - 1
    x = keys[j] - 1
    while len(out) < count and x > keys[0]:
        if x == keys[prv]:
            prv -= 1
        else:
            out.append(x)
        x -= 1
    return out


def _block_prefixes(ps: PrefixSums, grown: Sequence[int], upward: bool) -> list[_Block]:
    """Block summaries for sizes ``0..len(grown)``; ``grown`` is in growth order."""
    total_s = ps.S[ps.n]
    blocks = [_Block()]
    for value in grown:
        prev = blocks[-1]
        x = value - ps.origin
        below = bisect_left(ps.keys, x)
        own = total_s - ps.S[below] + x * (below + 1)
        if upward:
            points = (*prev.points, value)
            core = prev.core + own + x * len(prev.points)
        else:
            points = (value, *prev.points)
            core = prev.core + own + prev.sx
        blocks.append(_Block(points, prev.sx + x, prev.sx2 + x * x, core))
    return blocks


def _combine(ps: PrefixSums, left: _Block, middle: _Block, right: _Block) -> SummaryStats:
    n = ps.n
    n_left, n_mid = len(left.points), len(middle.points)
    return SummaryStats(
        m=n + n_left + n_mid + len(right.points),
        sum_x=ps.S[n] + left.sx + middle.sx + right.sx,
        sum_x2=ps.T[n] + left.sx2 + middle.sx2 + right.sx2,
        sum_xr=ps.U[n] + left.core + middle.core + n_left * middle.sx + right.core + (n_left + n_mid) * right.sx,
        origin=ps.origin,
    )


def _ordered(left: _Block, middle: _Block, right: _Block) -> bool:
    runs = [b for b in (left, middle, right) if b.points]
    return all(a.hi < b.lo for a, b in zip(runs, runs[1:]))


class _Best:
    """Running maximum of the loss; ties go to the smallest poison sequence."""

    def __init__(self) -> None:
        self.loss = -math.inf
        self.poisons: tuple[int, ...] = ()
        self.detail: SegEOriginal | None = None

    def offer(
        self,
        ps: PrefixSums,
        keys: KeySet,
        left: _Block,
        middle: _Block,
        right: _Block,
        anchor: Anchor | None,
    ) -> None:
        if not _ordered(left, middle, right):
            return
        loss = _combine(ps, left, middle, right).mse()
        if loss < self.loss:
            return
        poisons = left.points + middle.points + right.points
        if loss == self.loss and poisons >= self.poisons:
            return
        self.loss, self.poisons = loss, poisons
        self.detail = _boundaries(keys, left, middle, right, anchor)


def _boundaries(keys: KeySet, left: _Block, middle: _Block, right: _Block, anchor: Anchor | None) -> SegEOriginal:
    r1 = left.hi if left.points else keys.first
    l3 = right.lo if right.points else keys.last
    if not middle.points or anchor is None:
        return SegEOriginal(r1, None, None, l3)
    key, upward = anchor
    return SegEOriginal(r1, key, middle.hi, l3) if upward else SegEOriginal(r1, middle.lo, key, l3)


def _middle_anchors(keys: KeySet, ps: PrefixSums, size: int) -> list[tuple[Anchor, list[_Block]]]:
    anchors = []
    for j in range(1, keys.n - 1):
        up = _walk_up(keys.keys, j, size)
        anchors.append(((keys.keys[j], True), _block_prefixes(ps, up, upward=True)))
        down = _walk_down(keys.keys, j, size)
        anchors.append(((keys.keys[j], False), _block_prefixes(ps, down, upward=False)))
    return anchors


def sege_exact_original(keys: KeySet, lam: int) -> AttackReport:
    """Best Seg+E attack with distinct free integers as poisons.

    Every split ``left + middle + right ≤ lam`` is tried with the middle
    segment anchored at each interior key, extending either right of it or
    left of it. Endpoint blocks take the free integers closest to ``k_1`` and
    ``k_n``.

    Args:
        keys: Legitimate keys.
        lam: Poisoning budget, at least 1.
    Returns:
        Report with a :class:`SegEOriginal` detail. Equal losses resolve to the
        lexicographically smallest poison sequence.
    Raises:
        NoFeasiblePoison: If no free integer lies between ``k_1`` and ``k_n``.
    """
    if keys.free_interior() == 0:
        raise NoFeasiblePoison("every integer between the extremes is a legitimate key")

    ps = build_prefix_sums(keys)
    lefts = _block_prefixes(ps, _walk_up(keys.keys, 0, lam), upward=True)
    rights = _block_prefixes(ps, _walk_down(keys.keys, keys.n - 1, lam), upward=False)
    best = _Best()
    empty = _Block()

    for used, left in enumerate(lefts):
        for right in rights[: lam - used + 1]:
            best.offer(ps, keys, left, empty, right, None)

    for anchor, middles in _middle_anchors(keys, ps, lam):
        for m, middle in enumerate(middles[1:], start=1):
            for used, left in enumerate(lefts[: lam - m + 1]):
                for right in rights[: lam - m - used + 1]:
                    best.offer(ps, keys, left, middle, right, anchor)

    return AttackReport(
        method=AttackMethod.SEGE_EXACT,
        budget=lam,
        poisons=PoisonSet(best.poisons),
        mse_before=ps.base_stats().mse(),
        mse_after=best.loss,
        detail=best.detail,
    )


def _quadratic_through(y0: int, y1: int, y2: int) -> Polynomial:
    """The quadratic in ``b`` through ``(0, y0)``, ``(1, y1)``, ``(2, y2)``."""
    c2 = (y2 - 2 * y1 + y0) / 2
    c1 = (y1 - y0) - c2
    return Polynomial([float(y0), c1, c2])


def _real_roots(poly: Polynomial) -> list[float]:
    coef = poly.coef
    scale = max(abs(c) for c in coef) if len(coef) else 0.0
    if scale == 0:
        return []
    poly = Polynomial(coef / scale)
    slope = poly.deriv()
    roots = []
    for r in poly.roots():
        if abs(r.imag) > 1e-9 * (1 + abs(r.real)):
            continue
        x = float(r.real)
        d = slope(x)
        if d != 0:
            x -= poly(x) / d
        roots.append(x)
    return roots


def get_optimal_b(ps: PrefixSums, a: int, i: int, lam: int) -> int:
    """Interior multiplicity ``b ∈ [0, λ−a]`` that maximizes ``MSE(a, b, i)``.

    ``Var`` and ``Cov`` of the poisoned multiset are quadratics in ``b``, so a
    stationary point of ``Cov² / Var`` solves the cubic
    ``2·Cov'·Var − Cov·Var' = 0``. Only the range ends and the integers around
    its real roots are scored exactly. Ties go to the smallest ``b``.
    """
    top = lam - a
    if top <= 2:
        candidates = set(range(top + 1))
    else:
        samples = [poisoned_stats(ps, a, b, i, lam) for b in (0, 1, 2)]
        var = _quadratic_through(*(s.scaled_var_x for s in samples))
        cov = _quadratic_through(*(s.scaled_cov for s in samples))
        cubic = 2 * cov.deriv() * var - cov * var.deriv()
        candidates = {0, top}
        for r in _real_roots(cubic):
            if -1 <= r <= top + 1:
                for b in range(math.floor(r) - 1, math.ceil(r) + 2):
                    candidates.add(min(max(b, 0), top))

    return max(sorted(candidates), key=lambda b: (poisoned_stats(ps, a, b, i, lam).mse(), -b))


def _relaxed_search(keys: KeySet, lam: int) -> tuple[SegERelaxed, float]:
    if keys.n < 3:
        raise DegenerateInput("relaxed Seg+E needs an interior key (n ≥ 3)")
    ps = build_prefix_sums(keys)
    best, best_loss = SegERelaxed(0, 0, lam, 2), -math.inf
    for a in range(lam + 1):
        for i in range(2, keys.n):
            b = get_optimal_b(ps, a, i, lam)
            loss = poisoned_stats(ps, a, b, i, lam).mse()
            # ties: smallest (a, b, i)
            if loss > best_loss or (loss == best_loss and (a, b, i) < (best.a, best.b, best.p)):
                best, best_loss = SegERelaxed(a=a, b=b, c=lam - a - b, p=i), loss
    return best, best_loss


def sege_exact_relaxed(keys: KeySet, lam: int) -> AttackReport:
    """Best relaxed Seg+E allocation ``a·e_1 + b·e_i + (λ−a−b)·e_n``.

    O(nλ) grid over ``(a, i)`` with the best ``b`` found by
    :func:`get_optimal_b`. Ties resolve to the smallest ``(a, b, i)``.

    Raises:
        DegenerateInput: If there is no interior key.
    """
    pattern, loss = _relaxed_search(keys, lam)
    counts = [0] * keys.n
    counts[0] += pattern.a
    counts[pattern.p - 1] += pattern.b
    counts[-1] += pattern.c
    return AttackReport(
        method=AttackMethod.SEGE_RELAXED,
        budget=lam,
        poisons=PoisonCounts(tuple(counts), keys.keys),
        mse_before=build_prefix_sums(keys).base_stats().mse(),
        mse_after=loss,
        detail=pattern,
    )


def sege_heuristic_original(keys: KeySet, lam: int) -> AttackReport:
    """Original-setting Seg+E guided by the relaxed block sizes.

    The counts ``(a, b, c)`` of the relaxed solution become a left block, a
    middle segment and a right block of free integers. Only the anchor of the
    middle segment is searched.

    Raises:
        DegenerateInput: If there is no interior key.
        NoFeasiblePoison: If the blocks do not fit into the free integers.
    """
    pattern, _ = _relaxed_search(keys, lam)
    ps = build_prefix_sums(keys)
    left_run = _walk_up(keys.keys, 0, pattern.a)
    right_run = _walk_down(keys.keys, keys.n - 1, pattern.c)
    if len(left_run) < pattern.a or len(right_run) < pattern.c:
        raise NoFeasiblePoison(f"endpoint blocks {pattern.a}+{pattern.c} do not fit")
    left = _block_prefixes(ps, left_run, upward=True)[-1]
    right = _block_prefixes(ps, right_run, upward=False)[-1]

    best = _Best()
    if pattern.b == 0:
        best.offer(ps, keys, left, _Block(), right, None)
    else:
        for anchor, middles in _middle_anchors(keys, ps, pattern.b):
            if len(middles) > pattern.b:
                best.offer(ps, keys, left, middles[pattern.b], right, anchor)
    if best.detail is None:
        raise NoFeasiblePoison(f"no anchor hosts a middle segment of {pattern.b} poisons")

    logger.debug("heuristic blocks a=%d b=%d c=%d", pattern.a, pattern.b, pattern.c)
    return AttackReport(
        method=AttackMethod.SEGE_HEURISTIC,
        budget=lam,
        poisons=PoisonSet(best.poisons),
        mse_before=ps.base_stats().mse(),
        mse_after=best.loss,
        detail=best.detail,
    )
