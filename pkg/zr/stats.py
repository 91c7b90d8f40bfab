"""Exact least-squares statistics for lines fitted to (key, rank) pairs.

All moments are accumulated as Python integers over keys shifted by an
origin (the smallest legitimate key), so sums of squares stay exact no matter
how large the keys are. Floating point enters only in the final, correctly
rounded division, which makes equal multisets produce bit-identical losses.
"""

from bisect import bisect_left
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from zr.errors import BudgetViolation, DegenerateInput, IndexOutOfRange
from zr.keys import KeySet, RankedMultiset


@dataclass(slots=True, frozen=True)
class RegressionFit:
    """Optimal line ``rank = w * key + b`` and its mean squared error.

    ``offset`` is the predicted rank at ``origin``; predictions go through it
    so that large keys do not lose precision.
    """

    w: float
    b: float
    mse: float
    origin: int = 0
    offset: float = 0.0

    def predict(self, key: int) -> float:
        return self.w * (key - self.origin) + self.offset


@dataclass(slots=True, frozen=True)
class SummaryStats:
    """Integer moments of a ranked multiset, keys shifted by ``origin``."""

    m: int
    sum_x: int
    sum_x2: int
    sum_xr: int
    origin: int = 0

    @property
    def sum_r(self) -> int:
        return self.m * (self.m + 1) // 2

    @property
    def sum_r2(self) -> int:
        return self.m * (self.m + 1) * (2 * self.m + 1) // 6

    @property
    def scaled_var_x(self) -> int:
        """``m² · Var_X``."""
        return self.m * self.sum_x2 - self.sum_x * self.sum_x

    @property
    def scaled_cov(self) -> int:
        """``2m · Cov_XR``."""
        return 2 * self.sum_xr - (self.m + 1) * self.sum_x

    def _checked_var(self) -> int:
        var = self.scaled_var_x
        if var <= 0:
            raise DegenerateInput("at least two distinct values are required")
        return var

    def mse(self) -> float:
        """Optimal MSE ``Var_R − Cov_XR² / Var_X`` as one rounded division."""
        var = self._checked_var()
        cov = self.scaled_cov
        return ((self.m * self.m - 1) * var - 3 * cov * cov) / (12 * var)

    def moments(self) -> tuple[float, float, float]:
        """Return ``(Var_X, Var_R, Cov_XR)``."""
        var = self._checked_var()
        m = self.m
        return var / (m * m), (m * m - 1) / 12, self.scaled_cov / (2 * m)

    def fit(self) -> RegressionFit:
        var = self._checked_var()
        m = self.m
        w = self.scaled_cov * m / (2 * var)
        offset = (m + 1) / 2 - w * (self.sum_x / m)
        return RegressionFit(w=w, b=offset - w * self.origin, mse=self.mse(), origin=self.origin, offset=offset)


@dataclass(slots=True, frozen=True)
class PrefixSums:
    """Prefix arrays over shifted keys; index 0 holds zero.

    ``S[t] = Σ k_l``, ``T[t] = Σ k_l²`` and ``U[t] = Σ k_l·l`` for ``l ≤ t``.
    """

    origin: int
    keys: tuple[int, ...]
    S: tuple[int, ...]
    T: tuple[int, ...]
    U: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.keys)

    def base_stats(self) -> SummaryStats:
        n = self.n
        return SummaryStats(m=n, sum_x=self.S[n], sum_x2=self.T[n], sum_xr=self.U[n], origin=self.origin)


def stats_of(values: Iterable[int], origin: int | None = None) -> SummaryStats:
    """Accumulate the moments of a multiset given in any order."""
    ordered = sorted(values)
    shift = ordered[0] if origin is None and ordered else (origin or 0)
    sum_x = sum_x2 = sum_xr = 0
    for rank, value in enumerate(ordered, start=1):
        x = value - shift
        sum_x += x
        sum_x2 += x * x
        sum_xr += x * rank
    return SummaryStats(m=len(ordered), sum_x=sum_x, sum_x2=sum_x2, sum_xr=sum_xr, origin=shift)


def fit(values: RankedMultiset) -> RegressionFit:
    """Fit the least-squares line through ``(x_i, i)``.

    Args:
        values: Non-decreasing multiset with at least two distinct values.
    Returns:
        Slope, intercept and MSE of the optimal line.
    Raises:
        DegenerateInput: If fewer than two distinct values are present.
    """
    return stats_of(values.values).fit()


def build_prefix_sums(keys: KeySet, origin: int | None = None) -> PrefixSums:
    """Precompute the ``S``, ``T`` and ``U`` arrays in O(n).

    Args:
        keys: Legitimate keys.
        origin: Shift subtracted from every key, defaults to the smallest key.
    """
    shift = keys.first if origin is None else origin
    shifted = tuple(k - shift for k in keys)
    s, t, u = [0], [0], [0]
    for rank, x in enumerate(shifted, start=1):
        s.append(s[-1] + x)
        t.append(t[-1] + x * x)
        u.append(u[-1] + x * rank)
    return PrefixSums(origin=shift, keys=shifted, S=tuple(s), T=tuple(t), U=tuple(u))


def merged_stats(ps: PrefixSums, poisons: Sequence[int]) -> SummaryStats:
    """Moments of the keys plus a sorted run of poisons, in O(λ log n).

    Poisons are unshifted values in non-decreasing order; they may repeat and
    may coincide with keys (the relaxed setting), since equal values are
    interchangeable in the rank sum.
    """
    n = ps.n
    total_s = ps.S[n]
    sum_x, sum_x2, sum_xr = total_s, ps.T[n], ps.U[n]
    for s, value in enumerate(poisons):
        p = value - ps.origin
        below = bisect_left(ps.keys, p)
        sum_x += p
        sum_x2 += p * p
        # every key at or above p moves one rank up
        sum_xr += total_s - ps.S[below] + p * (s + 1 + below)
    return SummaryStats(m=n + len(poisons), sum_x=sum_x, sum_x2=sum_x2, sum_xr=sum_xr, origin=ps.origin)


def fit_with_poison(keys: KeySet, poisons: Iterable[int]) -> RegressionFit:
    """Fit the line over ``keys ∪ poisons``."""
    return merged_stats(build_prefix_sums(keys), sorted(poisons)).fit()


def poisoned_stats(ps: PrefixSums, a: int, b: int, i: int, lam: int) -> SummaryStats:
    """Moments of ``K ⊎ {a × k_1, b × k_i, (λ−a−b) × k_n}`` in O(1).

    ``i`` is the 1-based key index of the interior mass and is ignored when
    ``b`` is zero.

    Raises:
        BudgetViolation: If the counts are negative or exceed ``lam``.
        IndexOutOfRange: If ``b > 0`` and ``i`` is not an interior index.
    """
    n = ps.n
    if a < 0 or b < 0 or a + b > lam:
        raise BudgetViolation(f"a={a}, b={b} does not fit the budget {lam}")
    if b > 0 and not 2 <= i <= n - 1:
        raise IndexOutOfRange(f"interior index {i} outside 2..{n - 1}")
    if b == 0:
        i = 1
    c = lam - a - b
    big_n = n + lam
    k1, ki, kn = ps.keys[0], ps.keys[i - 1], ps.keys[-1]
    sum_x = ps.S[n] + a * k1 + b * ki + c * kn
    sum_x2 = ps.T[n] + a * k1 * k1 + b * ki * ki + c * kn * kn
    sum_xr = (
        ps.U[n]
        + a * ps.S[n]
        + b * (ps.S[n] - ps.S[i - 1])
        + a * (a + 1) // 2 * k1
        + (b * (a + i) + b * (b - 1) // 2) * ki
        + (c * big_n - c * (c - 1) // 2) * kn
    )
    return SummaryStats(m=big_n, sum_x=sum_x, sum_x2=sum_x2, sum_xr=sum_xr, origin=ps.origin)


def poisoned_moments(ps: PrefixSums, a: int, b: int, i: int, lam: int) -> tuple[float, float, float]:
    """Return ``(Var_K', Var_R', Cov_K'R')`` for the three-point allocation."""
    return poisoned_stats(ps, a, b, i, lam).moments()
