"""Provable upper bound on the loss any attack with a given budget can cause.

For a fixed multiplicity vector ``d`` the loss minimized over the intercept is
a convex quadratic in the slope ``w``. Swapping ``max`` and ``min`` gives

    min_w  max_d  min_b  L(K ⊎ Q_K(d); w, b)

which bounds the relaxed optimum from above. Only ``O(n + λ)`` candidate
vectors can attain the inner maximum: all poisons on one key, or split between
the two endpoints. The bound is then the minimum of the upper envelope of
those quadratics, found by one of three solvers.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from zr.envelope import QuadraticFn, upper_envelope
from zr.errors import InputError, InvalidBracket
from zr.keys import KeySet
from zr.stats import PrefixSums, build_prefix_sums, poisoned_stats, stats_of

logger = logging.getLogger(__name__)

DEFAULT_ITERATIONS = 50
GOLDEN = (math.sqrt(5) - 1) / 2


class BoundMethod(StrEnum):
    GOLDEN = "golden"
    BINARY = "binary"
    EXACT = "exact"


@dataclass(slots=True, frozen=True)
class BoundResult:
    value: float
    method: BoundMethod
    w_star: float

    def to_dict(self) -> dict:
        return {"method": str(self.method), "value": self.value, "w_star": self.w_star}


def _quadratic(ps: PrefixSums, a: int, b: int, i: int, lam: int) -> QuadraticFn:
    var_x, var_r, cov = poisoned_stats(ps, a, b, i, lam).moments()
    return QuadraticFn(a2=var_x, a1=-2 * cov, a0=var_r)


def candidate_quadratics(keys: KeySet, lam: int) -> list[QuadraticFn]:
    """Quadratics ``w ↦ min_b L(K ⊎ Q_K(d); w, b)`` for every candidate ``d``.

    One function per single-key vector ``λ·e_i`` (``i = 1..n``) and per
    endpoint split ``a·e_1 + (λ−a)·e_n`` (``a = 0..λ``). Each costs O(1)
    given the prefix sums.

    Args:
        keys: Legitimate keys.
        lam: Poisoning budget; zero yields the single quadratic of ``K``.
    """
    ps = build_prefix_sums(keys)
    if lam == 0:
        return [_quadratic(ps, 0, 0, 1, 0)]

    n = keys.n
    fns = [_quadratic(ps, lam, 0, 1, lam)]
    fns += [_quadratic(ps, 0, lam, i, lam) for i in range(2, n)]
    fns.append(_quadratic(ps, 0, 0, 1, lam))
    fns += [_quadratic(ps, a, 0, 1, lam) for a in range(lam + 1)]
    return fns


def _coefficients(fns: Sequence[QuadraticFn]) -> np.ndarray:
    return np.array([(f.a2, f.a1, f.a0) for f in fns], dtype=np.float64)


def _envelope_at(coef: np.ndarray, w: float) -> float:
    return float(np.max((coef[:, 0] * w + coef[:, 1]) * w + coef[:, 2]))


def _vertex_range(coef: np.ndarray) -> tuple[float, float]:
    vertices = -coef[:, 1] / (2 * coef[:, 0])
    lo, hi = float(vertices.min()), float(vertices.max())
    if lo == hi:
        lo, hi = lo - 1, hi + 1
    return lo, hi


def upper_bound_golden(fns: Sequence[QuadraticFn], iterations: int = DEFAULT_ITERATIONS) -> BoundResult:
    """Golden-section search on the convex envelope ``max_i f_i(w)``.

    The search interval spans the smallest to the largest vertex, since the
    envelope decreases left of every vertex and increases right of them.
    """
    coef = _coefficients(fns)
    w_l, w_r = _vertex_range(coef)
    w_1 = w_r - GOLDEN * (w_r - w_l)
    w_2 = w_l + GOLDEN * (w_r - w_l)
    y_1, y_2 = _envelope_at(coef, w_1), _envelope_at(coef, w_2)
    for _ in range(iterations):
        if y_1 <= y_2:
            w_r, w_2, y_2 = w_2, w_1, y_1
            w_1 = w_r - GOLDEN * (w_r - w_l)
            y_1 = _envelope_at(coef, w_1)
        else:
            w_l, w_1, y_1 = w_1, w_2, y_2
            w_2 = w_l + GOLDEN * (w_r - w_l)
            y_2 = _envelope_at(coef, w_2)
    w_star = (w_l + w_r) / 2
    return BoundResult(max(_envelope_at(coef, w_star), 0.0), BoundMethod.GOLDEN, w_star)


def _feasible_interval(coef: np.ndarray, y: float) -> tuple[float, float] | None:
    """Intersection of the level sets ``{w : f_i(w) ≤ y}``; ``None`` when empty."""
    a2, a1, a0 = coef[:, 0], coef[:, 1], coef[:, 2] - y
    disc = a1 * a1 - 4 * a2 * a0
    tangent = np.abs(disc) <= 1e-12 * (a1 * a1 + np.abs(4 * a2 * a0))
    if np.any((disc < 0) & ~tangent):
        return None
    root = np.sqrt(np.where(tangent, 0.0, disc))
    q = -(a1 + np.copysign(root, a1)) / 2
    safe_q = np.where(q == 0, 1.0, q)
    r1 = q / a2
    r2 = np.where(q == 0, 0.0, a0 / safe_q)
    w_l = float(np.max(np.minimum(r1, r2)))
    w_r = float(np.min(np.maximum(r1, r2)))
    return (w_l, w_r) if w_l <= w_r else None


def upper_bound_binary(
    fns: Sequence[QuadraticFn],
    iterations: int = DEFAULT_ITERATIONS,
    y_lo: float | None = None,
    y_hi: float | None = None,
) -> BoundResult:
    """Bisection on the value axis with an O(m) feasibility test per step.

    ``y`` is feasible when the level intervals of all quadratics at ``y``
    intersect. The returned value is the upper end of the final bracket; it
    undercuts the true minimum only by the tangency tolerance.

    Args:
        fns: Candidate quadratics.
        iterations: Number of bisection steps.
        y_lo: Lower end of the bracket, defaults to 0.
        y_hi: Upper end, defaults to the envelope at the middle vertex.
    Raises:
        InvalidBracket: If ``y_lo > y_hi`` or ``y_hi`` is infeasible.
    """
    coef = _coefficients(fns)
    if y_lo is None:
        y_lo = 0.0
    if y_hi is None:
        lo, hi = _vertex_range(coef)
        y_hi = _envelope_at(coef, (lo + hi) / 2)
        y_hi += abs(y_hi) * 1e-12
    if y_lo > y_hi:
        raise InvalidBracket(f"empty bracket [{y_lo}, {y_hi}]")
    interval = _feasible_interval(coef, y_hi)
    if interval is None:
        raise InvalidBracket(f"upper end {y_hi} of the bracket is infeasible")

    for _ in range(iterations):
        y_mid = (y_lo + y_hi) / 2
        found = _feasible_interval(coef, y_mid)
        if found is None:
            y_lo = y_mid
        else:
            y_hi, interval = y_mid, found
    return BoundResult(max(y_hi, 0.0), BoundMethod.BINARY, (interval[0] + interval[1]) / 2)


def upper_bound_exact(fns: Sequence[QuadraticFn]) -> BoundResult:
    """Build the exact envelope and minimize every piece at its clamped vertex."""
    envelope = upper_envelope(fns)
    logger.debug("envelope of %d quadratics has %d pieces", len(fns), len(envelope))
    w_star, value = envelope.minimum()
    return BoundResult(max(value, 0.0), BoundMethod.EXACT, w_star)


def upper_bound(
    keys: KeySet,
    lam: int,
    method: BoundMethod = BoundMethod.GOLDEN,
    iterations: int = DEFAULT_ITERATIONS,
) -> BoundResult:
    """Upper bound on the MSE after inserting at most ``lam`` poisons.

    Args:
        keys: Legitimate keys.
        lam: Poisoning budget.
        method: Min-max solver.
        iterations: Iterations of the golden or binary solver.
    Returns:
        A value no smaller than the loss of any attack with budget ``lam``,
        in either setting.
    """
    fns = candidate_quadratics(keys, lam)
    match BoundMethod(method):
        case BoundMethod.GOLDEN:
            return upper_bound_golden(fns, iterations)
        case BoundMethod.BINARY:
            return upper_bound_binary(fns, iterations)
        case BoundMethod.EXACT:
            return upper_bound_exact(fns)


def max_safe_budget(
    keys: KeySet,
    factor: float,
    method: BoundMethod = BoundMethod.GOLDEN,
    iterations: int = DEFAULT_ITERATIONS,
    lambda_max: int = 1_000_000,
) -> int:
    """Largest budget whose upper bound stays within ``factor`` times the clean loss.

    Doubling finds a failing budget, then bisection narrows down to the last
    budget that passes.

    Raises:
        InputError: If ``factor < 1`` or ``lambda_max < 0``.
    """
    if factor < 1:
        raise InputError(f"factor must be at least 1, got {factor}")
    if lambda_max < 0:
        raise InputError(f"lambda_max must be non-negative, got {lambda_max}")

    threshold = factor * stats_of(keys.keys).mse()

    def safe(lam: int) -> bool:
        return upper_bound(keys, lam, method, iterations).value <= threshold

    good, bad = 0, 1
    while bad <= lambda_max and safe(bad):
        good, bad = bad, bad * 2
    if bad > lambda_max:
        if good == lambda_max or safe(lambda_max):
            return lambda_max
        bad = lambda_max

    while bad - good > 1:
        mid = (good + bad) // 2
        if safe(mid):
            good = mid
        else:
            bad = mid
    logger.info("safe budget %d (factor %.3g)", good, factor)
    return good
